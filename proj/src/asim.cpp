#include "asimkit/asim.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "asimkit/error.hpp"
#include "json.hpp"

namespace asimkit {

using nlohmann::json;

// ---------------------------------------------------------------------------
// CrossRelation

CrossRelation::CrossRelation(std::size_t n1, std::size_t n2) : fwd_(n1, Bits(n2)), bwd_(n2, Bits(n1)) {}

CrossRelation CrossRelation::full(std::size_t n1, std::size_t n2) {
  CrossRelation r(n1, n2);
  for (auto& row : r.fwd_) row.set();
  for (auto& row : r.bwd_) row.set();
  return r;
}

CrossRelation CrossRelation::inverse() const {
  CrossRelation r(size1(), size2());
  for (std::size_t b = 0; b < size2(); ++b)
    for (auto a = bwd_[b].find_first(); a != Bits::npos; a = bwd_[b].find_next(a)) r.fwd_[a].set(b);
  for (std::size_t a = 0; a < size1(); ++a)
    for (auto b = fwd_[a].find_first(); b != Bits::npos; b = fwd_[a].find_next(b)) r.bwd_[b].set(a);
  return r;
}

CrossRelation& CrossRelation::operator&=(const CrossRelation& o) {
  if (size1() != o.size1() || size2() != o.size2()) throw PreconditionError("relations over different model pairs");
  for (std::size_t a = 0; a < size1(); ++a) fwd_[a] &= o.fwd_[a];
  for (std::size_t b = 0; b < size2(); ++b) bwd_[b] &= o.bwd_[b];
  return *this;
}

bool CrossRelation::subset_of(const CrossRelation& o) const {
  for (std::size_t a = 0; a < size1(); ++a)
    if (!fwd_[a].is_subset_of(o.fwd_[a])) return false;
  for (std::size_t b = 0; b < size2(); ++b)
    if (!bwd_[b].is_subset_of(o.bwd_[b])) return false;
  return true;
}

bool CrossRelation::is_symmetric() const { return *this == inverse(); }

std::size_t CrossRelation::count() const {
  std::size_t n = 0;
  for (const auto& row : fwd_) n += row.count();
  for (const auto& row : bwd_) n += row.count();
  return n;
}

CrossRelation parse_relation(std::string_view text, const Model& m1, const Model& m2) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("relation: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("relation: document must be an object");
  for (const auto& [key, _] : doc.items())
    if (key != "fwd" && key != "bwd") throw InputError("relation." + key + ": unknown field");
  CrossRelation r(m1.size(), m2.size());
  for (int dir = 0; dir < 2; ++dir) {
    const char* key = dir == 0 ? "fwd" : "bwd";
    if (!doc.contains(key)) continue;
    const Model& src = dir == 0 ? m1 : m2;
    const Model& dst = dir == 0 ? m2 : m1;
    const auto& arr = doc[key];
    if (!arr.is_array()) throw InputError(std::string("relation.") + key + ": expected an array of pairs");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = std::string("relation.") + key + "[" + std::to_string(i) + "]";
      const auto& p = arr[i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
        throw InputError(path + ": expected a pair of element names");
      auto a = src.index_of(p[0].get<std::string>());
      auto b = dst.index_of(p[1].get<std::string>());
      if (!a) throw InputError(path + "[0]: unknown element '" + p[0].get<std::string>() + "'");
      if (!b) throw InputError(path + "[1]: unknown element '" + p[1].get<std::string>() + "'");
      r.rows(dir)[*a].set(*b);
    }
  }
  return r;
}

std::string relation_to_json(const CrossRelation& r, const Model& m1, const Model& m2, int indent) {
  json doc;
  for (int dir = 0; dir < 2; ++dir) {
    const Model& src = dir == 0 ? m1 : m2;
    const Model& dst = dir == 0 ? m2 : m1;
    json arr = json::array();
    const auto& rows = r.rows(dir);
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (auto b = rows[a].find_first(); b != Bits::npos; b = rows[a].find_next(b))
        arr.push_back({src.name(a), dst.name(b)});
    doc[dir == 0 ? "fwd" : "bwd"] = std::move(arr);
  }
  return doc.dump(indent);
}

CrossRelation read_relation_file(const std::string& path, const Model& m1, const Model& m2) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open relation file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_relation(ss.str(), m1, m2);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Core candidates

const char* kind_name(CoreCandidateKind k) {
  switch (k) {
    case CoreCandidateKind::full: return "full";
    case CoreCandidateKind::same: return "same";
    case CoreCandidateKind::inverse: return "inverse";
    case CoreCandidateKind::symmetric_part: return "symmetric-part";
  }
  return "?";
}

CoreCandidateKind core_candidate_kind(const BoolClass& c) {
  if (c.is_constant) return CoreCandidateKind::full;
  if (c.is_monotone) return CoreCandidateKind::same;
  if (c.is_antimonotone) return CoreCandidateKind::inverse;
  return CoreCandidateKind::symmetric_part;
}

CrossRelation core_candidate(const BoolClass& c, const CrossRelation& A) {
  switch (core_candidate_kind(c)) {
    case CoreCandidateKind::full: return CrossRelation::full(A.size1(), A.size2());
    case CoreCandidateKind::same: return A;
    case CoreCandidateKind::inverse: return A.inverse();
    case CoreCandidateKind::symmetric_part: return A & A.inverse();
  }
  return A;
}

std::string Violation::to_json() const {
  json j;
  j["connective"] = connective;
  j["condition"] = condition;
  j["pair"] = {first, second};
  j["direction"] = direction == 0 ? "fwd" : "bwd";
  j["path"] = path;
  if (!detail.empty()) j["detail"] = detail;
  return j.dump();
}

// ---------------------------------------------------------------------------
// Pair-level conditions

namespace {

enum class Cond { back, forth, sback, sforth };

const char* cond_name(Cond c) {
  switch (c) {
    case Cond::back: return "back";
    case Cond::forth: return "forth";
    case Cond::sback: return "s-back";
    case Cond::sforth: return "s-forth";
  }
  return "?";
}

class Ctx {
 public:
  Ctx(const Model& m1, const Model& m2) : models_{&m1, &m2} {}

  const Model& model(int side) const { return *models_[side]; }

  /// Guard-path endpoints of every element of one side.
  const std::vector<Bits>& endpoints(int side, const Guards& g) {
    auto key = std::make_pair(side, g);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const Model& m = model(side);
    std::vector<Bits> rows;
    rows.reserve(m.size());
    for (std::size_t a = 0; a < m.size(); ++a) rows.push_back(guard_endpoints(m, g, a));
    return cache_.emplace(std::move(key), std::move(rows)).first->second;
  }

 private:
  const Model* models_[2];
  std::map<std::pair<int, Guards>, std::vector<Bits>> cache_;
};

struct Witness {
  std::size_t element = Bits::npos;  // unmatched endpoint
  bool on_source = false;            // which side the endpoint lives on
  int conjunct = 0;                  // 1 or 2 for the special conditions
};

// Endpoints from b1 not matched by any endpoint from a1 through T.
std::size_t back_miss(Ctx& ctx, int d, std::size_t a1, std::size_t b1, const CrossRelation& T, const Guards& g) {
  const int r = d, t = 1 - d;
  const Bits& ea = ctx.endpoints(r, g)[a1];
  const Bits& eb = ctx.endpoints(t, g)[b1];
  if (eb.none()) return Bits::npos;
  Bits covered(ctx.model(t).size());
  const auto& rows = T.rows(d);
  for (auto x = ea.find_first(); x != Bits::npos; x = ea.find_next(x)) covered |= rows[x];
  Bits miss = eb - covered;
  return miss.find_first();
}

// Endpoints from a1 with no partner among the endpoints from b1.
std::size_t forth_miss(Ctx& ctx, int d, std::size_t a1, std::size_t b1, const CrossRelation& T, const Guards& g) {
  const int r = d, t = 1 - d;
  const Bits& ea = ctx.endpoints(r, g)[a1];
  const Bits& eb = ctx.endpoints(t, g)[b1];
  const auto& rows = T.rows(d);
  for (auto x = ea.find_first(); x != Bits::npos; x = ea.find_next(x))
    if (!rows[x].intersects(eb)) return x;
  return Bits::npos;
}

// `T` is the target for back/forth and B for the special variants; `Tinv`
// is inverse(B), only read by the special variants.
Witness pair_check(Ctx& ctx, Cond c, int d, std::size_t a1, std::size_t b1, const CrossRelation& T,
                   const CrossRelation* Tinv, const Guards& g) {
  Witness w;
  switch (c) {
    case Cond::back:
      w.element = back_miss(ctx, d, a1, b1, T, g);
      break;
    case Cond::forth:
      w.element = forth_miss(ctx, d, a1, b1, T, g);
      w.on_source = true;
      break;
    case Cond::sback:
      w.element = back_miss(ctx, d, a1, b1, T, g);
      w.conjunct = 1;
      if (w.element == Bits::npos) {
        w.element = back_miss(ctx, d, a1, b1, *Tinv, g);
        w.conjunct = 2;
      }
      break;
    case Cond::sforth:
      w.on_source = true;
      w.element = forth_miss(ctx, d, a1, b1, T, g);
      w.conjunct = 1;
      if (w.element == Bits::npos) {
        w.element = forth_miss(ctx, d, a1, b1, *Tinv, g);
        w.conjunct = 2;
      }
      break;
  }
  return w;
}

Violation make_violation(Ctx& ctx, const std::string& connective, Cond c, int d, std::size_t a1, std::size_t b1,
                         const Witness& w, const Guards& g) {
  const int r = d, t = 1 - d;
  Violation v;
  v.connective = connective;
  v.condition = cond_name(c);
  v.first = ctx.model(r).name(a1);
  v.second = ctx.model(t).name(b1);
  v.direction = d;
  const int side = w.on_source ? r : t;
  const std::size_t start = w.on_source ? a1 : b1;
  for (auto e : guard_path(ctx.model(side), g, start, w.element)) v.path.push_back(ctx.model(side).name(e));
  if (w.conjunct == 2)
    v.detail = "second conjunct: no matching endpoint through the inverse relation";
  else if (w.conjunct == 1)
    v.detail = "first conjunct: no matching endpoint through the relation";
  return v;
}

// Every pair of `outer` in both directions, first failure reported.
std::optional<Violation> check_all(Ctx& ctx, const std::string& connective, Cond c, const CrossRelation& outer,
                                   const CrossRelation& T, const Guards& g) {
  std::optional<CrossRelation> inv;
  if (c == Cond::sback || c == Cond::sforth) inv = T.inverse();
  for (int d = 0; d < 2; ++d) {
    const auto& rows = outer.rows(d);
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (auto b = rows[a].find_first(); b != Bits::npos; b = rows[a].find_next(b)) {
        Witness w = pair_check(ctx, c, d, a, b, T, inv ? &*inv : nullptr, g);
        if (w.element != Bits::npos) return make_violation(ctx, connective, c, d, a, b, w, g);
      }
    }
  }
  return std::nullopt;
}

// All pairs (both directions) satisfying the condition.
CrossRelation passing(Ctx& ctx, Cond c, const CrossRelation& T, const Guards& g) {
  std::optional<CrossRelation> inv;
  if (c == Cond::sback || c == Cond::sforth) inv = T.inverse();
  CrossRelation out(T.size1(), T.size2());
  for (int d = 0; d < 2; ++d) {
    auto& rows = out.rows(d);
    const std::size_t width = d == 0 ? T.size2() : T.size1();
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = 0; b < width; ++b)
        if (pair_check(ctx, c, d, a, b, T, inv ? &*inv : nullptr, g).element == Bits::npos) rows[a].set(b);
  }
  return out;
}

Cond block_cond(Quantifier q, bool special) {
  if (q == Quantifier::forall) return special ? Cond::sback : Cond::back;
  return special ? Cond::sforth : Cond::forth;
}

// The outermost obligation of a connective of degree >= 1: the condition,
// its target and the guards of the outermost block.
struct Outer {
  Cond cond;
  CrossRelation target;
  Guards guards;
};

Outer outer_obligation(Ctx& ctx, const GuardedConnective& mu, const CrossRelation& A) {
  const unsigned deg = mu.degree();
  CrossRelation X = core_candidate(classify(mu.core()), A);
  const bool inner_special = is_special(deg == 1 ? mu : ancestor(mu, 1));
  for (unsigned i = 0; i < deg; ++i) {
    const GuardBlock& block = mu.blocks()[deg - 1 - i];
    const bool special = i == 0 && inner_special;
    const Cond c = block_cond(block.quantifier, special);
    const CrossRelation& T = special ? A : X;
    if (i + 1 == deg) return Outer{c, T, block.guards};
    X = passing(ctx, c, T, block.guards);
  }
  throw PreconditionError("outer obligation of a degree-0 connective");
}

GuardedConnective prepared(const GuardedConnective& mu, const AsimOptions& opts) {
  GuardedConnective n = normalize(mu);
  if (!opts.allow_nonstandard && !classify_connective(n).is_standard)
    throw UnsupportedFragment("connective '" + mu.name() + "' is not standard");
  return n;
}

bool degree0_needs_symmetry(const GuardedConnective& mu) {
  if (mu.degree() != 0) return false;
  const BoolClass c = classify(mu.core());
  return !c.is_constant && !c.is_monotone;
}

}  // namespace

std::optional<Violation> back_holds(const CrossRelation& outer, const CrossRelation& target, const Guards& guards,
                                    const Model& m1, const Model& m2) {
  Ctx ctx(m1, m2);
  return check_all(ctx, "", Cond::back, outer, target, guards);
}

std::optional<Violation> forth_holds(const CrossRelation& outer, const CrossRelation& target, const Guards& guards,
                                     const Model& m1, const Model& m2) {
  Ctx ctx(m1, m2);
  return check_all(ctx, "", Cond::forth, outer, target, guards);
}

std::optional<Violation> sback_holds(const CrossRelation& outer, const CrossRelation& B, const Guards& guards,
                                     const Model& m1, const Model& m2) {
  Ctx ctx(m1, m2);
  return check_all(ctx, "", Cond::sback, outer, B, guards);
}

std::optional<Violation> sforth_holds(const CrossRelation& outer, const CrossRelation& B, const Guards& guards,
                                      const Model& m1, const Model& m2) {
  Ctx ctx(m1, m2);
  return check_all(ctx, "", Cond::sforth, outer, B, guards);
}

CrossRelation max_inner_target(const GuardedConnective& mu_minus, const CrossRelation& A1,
                               const CrossRelation& A_for_special, const Model& m1, const Model& m2) {
  if (mu_minus.degree() != 1) throw PreconditionError("max_inner_target needs a degree-1 connective");
  Ctx ctx(m1, m2);
  const bool special = is_special(mu_minus);
  const GuardBlock& block = mu_minus.blocks()[0];
  return passing(ctx, block_cond(block.quantifier, special), special ? A_for_special : A1, block.guards);
}

std::optional<Violation> connective_condition(const GuardedConnective& mu_in, const CrossRelation& A, const Model& m1,
                                              const Model& m2, const AsimOptions& opts) {
  const GuardedConnective mu = prepared(mu_in, opts);
  Ctx ctx(m1, m2);
  if (mu.degree() == 0) {
    if (!degree0_needs_symmetry(mu)) return std::nullopt;
    const CrossRelation inv = A.inverse();
    for (int d = 0; d < 2; ++d) {
      const auto& rows = A.rows(d);
      for (std::size_t a = 0; a < rows.size(); ++a) {
        const Bits missing = rows[a] - inv.rows(d)[a];
        if (auto b = missing.find_first(); b != Bits::npos) {
          Violation v;
          v.connective = mu.name();
          v.condition = "degree0";
          v.first = ctx.model(d).name(a);
          v.second = ctx.model(1 - d).name(b);
          v.direction = d;
          v.detail = "the relation is not equal to its inverse: the reversed pair is missing";
          return v;
        }
      }
    }
    return std::nullopt;
  }
  const Outer o = outer_obligation(ctx, mu, A);
  return check_all(ctx, mu.name(), o.cond, A, o.target, o.guards);
}

CrossRelation admissible_pairs(const GuardedConnective& mu_in, const CrossRelation& A, const Model& m1,
                               const Model& m2, const AsimOptions& opts) {
  const GuardedConnective mu = prepared(mu_in, opts);
  if (mu.degree() == 0) return CrossRelation::full(A.size1(), A.size2());
  Ctx ctx(m1, m2);
  const Outer o = outer_obligation(ctx, mu, A);
  return passing(ctx, o.cond, o.target, o.guards);
}

CrossRelation atom_preserving(const Model& m1, const Model& m2, const std::vector<std::string>& preds) {
  CrossRelation r = CrossRelation::full(m1.size(), m2.size());
  for (const auto& p : preds) {
    const Bits& e1 = m1.extension(p);
    const Bits& e2 = m2.extension(p);
    for (auto a = e1.find_first(); a != Bits::npos; a = e1.find_next(a)) r.rows(0)[a] &= e2;
    for (auto b = e2.find_first(); b != Bits::npos; b = e2.find_next(b)) r.rows(1)[b] &= e1;
  }
  return r;
}

bool needs_symmetry(const Signature& sig) {
  for (const auto& [name, mu] : sig)
    if (degree0_needs_symmetry(normalize(mu))) return true;
  return false;
}

std::vector<Violation> is_asimulation(const Signature& sig, const std::vector<std::string>& preds, const Model& m1,
                                      const Model& m2, const CrossRelation& A, const AsimOptions& opts) {
  std::vector<Violation> out;
  if (A.size1() != m1.size() || A.size2() != m2.size()) throw PreconditionError("relation does not fit the models");
  for (const auto& [name, mu] : sig) prepared(mu, opts);
  if (A.empty()) {
    Violation v;
    v.condition = "empty";
    v.detail = "an asimulation must be non-empty";
    out.push_back(std::move(v));
    return out;
  }
  const Model* models[2] = {&m1, &m2};
  for (int d = 0; d < 2; ++d) {
    const Model& src = *models[d];
    const Model& dst = *models[1 - d];
    const auto& rows = A.rows(d);
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (auto b = rows[a].find_first(); b != Bits::npos; b = rows[a].find_next(b)) {
        for (const auto& p : preds) {
          if (src.holds(p, a) && !dst.holds(p, b)) {
            Violation v;
            v.condition = "atom";
            v.first = src.name(a);
            v.second = dst.name(b);
            v.direction = d;
            v.detail = p + " holds at the first element but not at the second";
            out.push_back(std::move(v));
            break;
          }
        }
      }
    }
  }
  for (const auto& [name, mu] : sig)
    if (auto v = connective_condition(mu, A, m1, m2, opts)) out.push_back(std::move(*v));
  return out;
}

LargestResult largest_asimulation(const Signature& sig, const std::vector<std::string>& preds, const Model& m1,
                                  const Model& m2, const AsimOptions& opts) {
  std::vector<GuardedConnective> members;
  for (const auto& [name, mu] : sig) {
    GuardedConnective n = prepared(mu, opts);
    if (n.degree() > 0) members.push_back(std::move(n));
  }
  const bool sym = needs_symmetry(sig);
  LargestResult res;
  CrossRelation A = atom_preserving(m1, m2, preds);
  if (sym) A &= A.inverse();
  Ctx ctx(m1, m2);
  for (;;) {
    ++res.rounds;
    CrossRelation next = A;
    for (const auto& mu : members) {
      const Outer o = outer_obligation(ctx, mu, next);
      next &= passing(ctx, o.cond, o.target, o.guards);
    }
    if (sym) next &= next.inverse();
    if (next == A) break;
    A = std::move(next);
  }
  res.none = A.empty();
  res.relation = std::move(A);
  return res;
}

std::optional<Counterexample> invariance_check(const FoFormula& phi, const CrossRelation& A, const Model& m1,
                                               const Model& m2) {
  const auto fv = free_vars(phi);
  if (fv.size() > 1) throw PreconditionError("invariance_check needs a formula with one free variable");
  const std::string var = fv.empty() ? std::string("x") : *fv.begin();
  const Bits s1 = eval_fo_set(m1, phi, var);
  const Bits s2 = eval_fo_set(m2, phi, var);
  const Bits* sets[2] = {&s1, &s2};
  for (int d = 0; d < 2; ++d) {
    const auto& rows = A.rows(d);
    for (std::size_t a = 0; a < rows.size(); ++a) {
      if (!sets[d]->test(a)) continue;
      const Bits broken = rows[a] - *sets[1 - d];
      if (auto b = broken.find_first(); b != Bits::npos) return Counterexample{a, b, d};
    }
  }
  return std::nullopt;
}

Preservation preservation_relation(const Signature& sig, const std::vector<std::string>& preds, const Model& m1,
                                   const Model& m2, unsigned depth, const EnumerationLimits& limits) {
  Enumeration e = enumerate_fragment(sig, preds, depth, m1, m2, limits);
  Preservation out;
  out.relation = CrossRelation::full(m1.size(), m2.size());
  out.status = e.status;
  out.closed = e.closed;
  out.formulas = e.size();
  const std::size_t n1 = m1.size(), n2 = m2.size();
  for (std::size_t i = 0; i < e.size(); ++i) {
    const Bits& v = e.vector(i);
    Bits p1(n1), p2(n2);
    for (std::size_t a = 0; a < n1; ++a) p1[a] = v[a];
    for (std::size_t b = 0; b < n2; ++b) p2[b] = v[n1 + b];
    for (auto a = p1.find_first(); a != Bits::npos; a = p1.find_next(a)) out.relation.rows(0)[a] &= p2;
    for (auto b = p2.find_first(); b != Bits::npos; b = p2.find_next(b)) out.relation.rows(1)[b] &= p1;
  }
  return out;
}

std::vector<std::string> joint_predicates(const Model& m1, const Model& m2) {
  std::set<std::string> all;
  for (const auto& p : m1.predicate_symbols()) all.insert(p);
  for (const auto& p : m2.predicate_symbols()) all.insert(p);
  return {all.begin(), all.end()};
}

}  // namespace asimkit
