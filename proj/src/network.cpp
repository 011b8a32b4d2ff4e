#include "ergocheck/network.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "ergocheck/errors.hpp"

namespace ergocheck {

std::int64_t Reaction::order() const {
  return std::accumulate(reactants.begin(), reactants.end(), std::int64_t{0});
}

Counts Reaction::displacement() const {
  Counts z(reactants.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = products[i] - reactants[i];
  return z;
}

ReactionNetwork::ReactionNetwork(std::vector<std::string> species, std::vector<Reaction> reactions)
    : species_(std::move(species)), reactions_(std::move(reactions)) {
  if (species_.empty()) throw InputError("network has no species");
  if (reactions_.empty()) throw InputError("network has no reactions");
  std::vector<std::string> sorted = species_;
  std::sort(sorted.begin(), sorted.end());
  if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end())
    throw DuplicateSpecies(0, 0, "duplicate species '" + *dup + "'");
  const std::size_t d = species_.size();
  for (std::size_t k = 0; k < reactions_.size(); ++k) {
    const auto& r = reactions_[k];
    if (r.reactants.size() != d || r.products.size() != d)
      throw DimensionMismatch("reaction " + std::to_string(k + 1) + " has wrong species dimension");
    auto negative = [](std::int64_t c) { return c < 0; };
    if (std::any_of(r.reactants.begin(), r.reactants.end(), negative) ||
        std::any_of(r.products.begin(), r.products.end(), negative))
      throw InputError("reaction " + std::to_string(k + 1) + " has a negative coefficient");
    if (r.rate <= 0)
      throw NonPositiveRate(0, 0, "reaction " + std::to_string(k + 1) + " has non-positive rate");
  }
}

std::optional<std::size_t> ReactionNetwork::species_index(std::string_view name) const {
  for (std::size_t i = 0; i < species_.size(); ++i)
    if (species_[i] == name) return i;
  return std::nullopt;
}

std::vector<std::size_t> ReactionNetwork::identity_reactions() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < reactions_.size(); ++k)
    if (reactions_[k].is_identity()) out.push_back(k);
  return out;
}

ReactionNetwork ReactionNetwork::permuted(std::span<const std::size_t> order) const {
  const std::size_t d = species_.size();
  if (order.size() != d) throw DimensionMismatch("permutation length differs from species count");
  std::vector<std::string> names(d);
  for (std::size_t i = 0; i < d; ++i) names[i] = species_.at(order[i]);
  std::vector<Reaction> rs;
  rs.reserve(reactions_.size());
  for (const auto& r : reactions_) {
    Reaction p{Counts(d), Counts(d), r.rate};
    for (std::size_t i = 0; i < d; ++i) {
      p.reactants[i] = r.reactants[order[i]];
      p.products[i] = r.products[order[i]];
    }
    rs.push_back(std::move(p));
  }
  return ReactionNetwork(std::move(names), std::move(rs));
}

NetworkStructure structure_of(const ReactionNetwork& net) {
  NetworkStructure s{net.species_count(), {}};
  s.pairs.reserve(net.reaction_count());
  for (const auto& r : net.reactions()) s.pairs.emplace_back(r.reactants, r.products);
  return s;
}

NetworkStructure inverse_structure(const NetworkStructure& s) {
  NetworkStructure inv{s.species_count, {}};
  inv.pairs.reserve(s.pairs.size());
  for (const auto& [reactants, products] : s.pairs) inv.pairs.emplace_back(products, reactants);
  return inv;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct Term {
  std::int64_t count;
  std::string name;
  std::size_t column;
};

class LineCursor {
 public:
  LineCursor(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool done() {
    skip_space();
    return pos_ >= text_.size();
  }
  bool peek(std::string_view token) {
    skip_space();
    return text_.substr(pos_).starts_with(token);
  }
  bool accept(std::string_view token) {
    if (!peek(token)) return false;
    pos_ += token.size();
    return true;
  }
  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }
  std::size_t column() const { return pos_ + 1; }
  std::string_view rest() const { return text_.substr(pos_); }
  void consume_all() { pos_ = text_.size(); }

  std::string name() {
    skip_space();
    if (pos_ >= text_.size() || !is_name_start(text_[pos_])) fail("expected species name");
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::vector<Term> side() {
    skip_space();
    std::vector<Term> terms;
    if (pos_ < text_.size() && text_[pos_] == '0') {
      std::size_t after = pos_ + 1;
      if (after >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[after]))) {
        ++pos_;
        return terms;
      }
    }
    do {
      skip_space();
      std::size_t col = column();
      std::int64_t count = 1;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        auto digits = text_.substr(start, pos_ - start);
        if (digits.size() > 9) fail("stoichiometric coefficient too large");
        count = std::stoll(std::string(digits));
        if (count == 0) fail("zero stoichiometric coefficient");
        expect("*");
      }
      terms.push_back({count, name(), col});
    } while (accept("+"));
    return terms;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, column(), what); }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

struct RawReaction {
  std::vector<Term> reactants, products;
  Rational rate;
  std::size_t line;
};

}  // namespace

ReactionNetwork parse_network(std::string_view text) {
  std::vector<std::string> species;
  std::unordered_map<std::string, std::size_t> index;
  bool header = false;
  std::vector<RawReaction> raw;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    LineCursor cur(line, line_no);
    if (cur.done()) continue;

    if (cur.accept("species:")) {
      if (header) cur.fail("second species header");
      if (!raw.empty()) cur.fail("species header must precede all reactions");
      header = true;
      while (!cur.done()) {
        std::size_t col = cur.column();
        cur.skip_space();
        col = cur.column();
        auto name = cur.name();
        if (index.contains(name)) throw DuplicateSpecies(line_no, col, "duplicate species '" + name + "'");
        index.emplace(name, species.size());
        species.push_back(name);
      }
      if (species.empty()) cur.fail("empty species header");
      continue;
    }

    RawReaction r;
    r.line = line_no;
    r.reactants = cur.side();
    cur.expect("->");
    r.products = cur.side();
    cur.expect(";");
    cur.skip_space();
    std::size_t rate_col = cur.column();
    std::string_view rate_text = cur.rest();
    while (!rate_text.empty() && std::isspace(static_cast<unsigned char>(rate_text.back())))
      rate_text.remove_suffix(1);
    if (rate_text.empty()) cur.fail("missing rate constant");
    try {
      r.rate = parse_rational(rate_text);
    } catch (const std::invalid_argument&) {
      throw ParseError(line_no, rate_col, "malformed rate constant '" + std::string(rate_text) + "'");
    }
    if (r.rate <= 0) throw NonPositiveRate(line_no, rate_col, "rate constant must be positive");
    cur.consume_all();

    for (auto* side : {&r.reactants, &r.products})
      for (const auto& t : *side) {
        if (index.contains(t.name)) continue;
        if (header) throw ParseError(line_no, t.column, "species '" + t.name + "' not declared in header");
        index.emplace(t.name, species.size());
        species.push_back(t.name);
      }
    raw.push_back(std::move(r));
  }

  if (raw.empty()) throw ParseError(line_no, 1, "no reactions");

  const std::size_t d = species.size();
  std::vector<Reaction> reactions;
  reactions.reserve(raw.size());
  for (const auto& r : raw) {
    Reaction out{Counts(d, 0), Counts(d, 0), r.rate};
    for (const auto& t : r.reactants) out.reactants[index.at(t.name)] += t.count;
    for (const auto& t : r.products) out.products[index.at(t.name)] += t.count;
    reactions.push_back(std::move(out));
  }
  return ReactionNetwork(std::move(species), std::move(reactions));
}

namespace {

std::string format_side(const std::vector<std::string>& names, const Counts& c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    if (!out.empty()) out += " + ";
    if (c[i] != 1) out += std::to_string(c[i]) + "*";
    out += names[i];
  }
  return out.empty() ? "0" : out;
}

}  // namespace

std::string format_reaction(const ReactionNetwork& net, std::size_t k) {
  const auto& r = net.reaction(k);
  return format_side(net.species(), r.reactants) + " -> " + format_side(net.species(), r.products);
}

std::string serialize_network(const ReactionNetwork& net) {
  std::ostringstream os;
  os << "species:";
  for (const auto& s : net.species()) os << ' ' << s;
  os << '\n';
  for (std::size_t k = 0; k < net.reaction_count(); ++k)
    os << format_reaction(net, k) << " ; " << to_string(net.reaction(k).rate) << '\n';
  return os.str();
}

IntegerMatrix stoichiometry_matrix(const NetworkStructure& s) {
  IntegerMatrix m(s.species_count, s.pairs.size());
  for (std::size_t k = 0; k < s.pairs.size(); ++k)
    for (std::size_t i = 0; i < s.species_count; ++i)
      m(i, k) = s.pairs[k].second[i] - s.pairs[k].first[i];
  return m;
}

IntegerMatrix stoichiometry_matrix(const ReactionNetwork& net) {
  return stoichiometry_matrix(structure_of(net));
}

namespace {

void check_args(const ReactionNetwork& net, std::size_t k, std::span<const std::int64_t> x) {
  if (k >= net.reaction_count())
    throw IndexOutOfRange("reaction index " + std::to_string(k) + " out of range");
  if (x.size() != net.species_count())
    throw DimensionMismatch("state has " + std::to_string(x.size()) + " entries, expected " +
                          std::to_string(net.species_count()));
  for (auto xi : x)
    if (xi < 0) throw IndexOutOfRange("state has a negative entry");
}

}  // namespace

Rational propensity(const ReactionNetwork& net, std::size_t k, std::span<const std::int64_t> x) {
  check_args(net, k, x);
  const auto& r = net.reaction(k);
  Integer numerator = 1;
  Integer denominator = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::int64_t j = 0; j < r.reactants[i]; ++j) {
      numerator *= static_cast<long>(x[i] - j);
      denominator *= static_cast<long>(j + 1);
    }
  }
  if (numerator <= 0) return Rational(0);
  Rational q(numerator, denominator);
  q.canonicalize();
  return r.rate * q;
}

double propensity_value(const ReactionNetwork& net, std::size_t k, std::span<const std::int64_t> x) {
  const auto& r = net.reaction(k);
  double value = r.rate.get_d();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::int64_t need = r.reactants[i];
    if (need == 0) continue;
    if (x[i] < need) return 0.0;
    for (std::int64_t j = 0; j < need; ++j)
      value *= static_cast<double>(x[i] - j) / static_cast<double>(j + 1);
  }
  return value;
}

}  // namespace ergocheck
