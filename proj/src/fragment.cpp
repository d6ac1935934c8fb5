#include "asimkit/fragment.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <utility>

#include "asimkit/error.hpp"
#include "lexer.hpp"

namespace asimkit {

using detail::Lexer;
using detail::Tok;

FragmentFormula FragmentFormula::atom(std::string pred) {
  FragmentFormula f;
  f.kind = Kind::atom;
  f.name = std::move(pred);
  return f;
}

FragmentFormula FragmentFormula::apply(std::string connective, std::vector<FragmentFormula> args) {
  FragmentFormula f;
  f.kind = Kind::apply;
  f.name = std::move(connective);
  f.kids = std::move(args);
  return f;
}

namespace {

class FragmentParser {
 public:
  FragmentParser(std::string_view text, const Signature& sig) : lex_(text), sig_(sig) {}

  FragmentFormula parse() {
    FragmentFormula f = formula();
    if (!lex_.at(Tok::end)) lex_.fail("unexpected " + lex_.found());
    return f;
  }

 private:
  FragmentFormula formula() {
    if (!lex_.at(Tok::ident)) lex_.fail("expected a predicate or connective, found " + lex_.found());
    const std::size_t pos = lex_.peek().pos;
    const std::string word = lex_.next().text;
    if (detail::indexed_name(word, 'P')) return FragmentFormula::atom(word);
    const GuardedConnective* mu = sig_.find(word);
    if (!mu) throw ParseError("unknown connective '" + word + "'", pos);
    std::vector<FragmentFormula> args;
    if (lex_.accept(Tok::lparen)) {
      if (!lex_.at(Tok::rparen)) {
        do args.push_back(formula());
        while (lex_.accept(Tok::comma));
      }
      lex_.expect(Tok::rparen);
    }
    if (args.size() != mu->arity())
      throw ParseError("connective '" + word + "' takes " + std::to_string(mu->arity()) + " arguments, got " +
                           std::to_string(args.size()),
                       pos);
    return FragmentFormula::apply(word, std::move(args));
  }

  Lexer lex_;
  const Signature& sig_;
};

void render(const FragmentFormula& f, std::string& out) {
  out += f.name;
  if (f.kind == FragmentFormula::Kind::atom || f.kids.empty()) return;
  out.push_back('(');
  for (std::size_t i = 0; i < f.kids.size(); ++i) {
    if (i) out += ",";
    render(f.kids[i], out);
  }
  out.push_back(')');
}

}  // namespace

FragmentFormula parse_fragment(std::string_view text, const Signature& sig) { return FragmentParser(text, sig).parse(); }

std::string to_string(const FragmentFormula& f) {
  std::string out;
  render(f, out);
  return out;
}

unsigned depth(const FragmentFormula& f) {
  if (f.kids.empty()) return 0;
  unsigned d = 0;
  for (const auto& k : f.kids) d = std::max(d, depth(k));
  return d + 1;
}

void check_formula(const FragmentFormula& f, const Signature& sig) {
  if (f.kind == FragmentFormula::Kind::atom) {
    if (!detail::indexed_name(f.name, 'P')) throw InputError("'" + f.name + "' is not a predicate symbol");
    return;
  }
  const GuardedConnective* mu = sig.find(f.name);
  if (!mu) throw InputError("unknown connective '" + f.name + "'");
  if (mu->arity() != f.kids.size())
    throw InputError("connective '" + f.name + "' takes " + std::to_string(mu->arity()) + " arguments, got " +
                     std::to_string(f.kids.size()));
  for (const auto& k : f.kids) check_formula(k, sig);
}

Bits eval_fragment_set(const Model& m, const FragmentFormula& f, const Signature& sig) {
  if (f.kind == FragmentFormula::Kind::atom) {
    if (!detail::indexed_name(f.name, 'P')) throw InputError("'" + f.name + "' is not a predicate symbol");
    return m.extension(f.name);
  }
  const GuardedConnective& mu = sig.at(f.name);
  if (mu.arity() != f.kids.size()) throw InputError("arity mismatch for connective '" + f.name + "'");
  std::vector<Bits> args;
  args.reserve(f.kids.size());
  for (const auto& k : f.kids) args.push_back(eval_fragment_set(m, k, sig));
  return apply_connective(m, mu, args);
}

bool eval_fragment(const Model& m, std::size_t point, const FragmentFormula& f, const Signature& sig) {
  if (point >= m.size()) throw PreconditionError("point outside the domain");
  return eval_fragment_set(m, f, sig).test(point);
}

static FoFormula translate(const FragmentFormula& f, const std::string& var, const Signature& sig, FreshVars& fresh) {
  if (f.kind == FragmentFormula::Kind::atom) return FoFormula::pred(f.name, var);
  const GuardedConnective& mu = sig.at(f.name);
  if (mu.arity() != f.kids.size()) throw InputError("arity mismatch for connective '" + f.name + "'");
  auto bound = allocate_bound_vars(mu, fresh);
  const std::string inner = bound.empty() ? var : bound.back();
  std::vector<FoFormula> args;
  for (const auto& k : f.kids) args.push_back(translate(k, inner, sig, fresh));
  return build_translation(mu, var, bound, std::move(args));
}

FoFormula std_translate(const FragmentFormula& f, const std::string& var, const Signature& sig) {
  FreshVars fresh({var});
  return translate(f, var, sig, fresh);
}

// ---------------------------------------------------------------------------
// Enumeration

const char* status_name(EnumStatus s) {
  switch (s) {
    case EnumStatus::complete: return "complete";
    case EnumStatus::budget_exhausted: return "budget_exhausted";
    case EnumStatus::stopped: return "stopped";
  }
  return "?";
}

FragmentFormula Enumeration::formula(std::size_t i) const {
  const Node& n = nodes_.at(i);
  if (n.connective < 0) return FragmentFormula::atom(n.atom);
  std::vector<FragmentFormula> kids;
  for (auto k : n.kids) kids.push_back(formula(k));
  return FragmentFormula::apply(connective_names[static_cast<std::size_t>(n.connective)], std::move(kids));
}

namespace {

struct BitsHash {
  std::size_t operator()(const Bits& b) const {
    std::size_t h = b.size();
    std::vector<Bits::block_type> blocks(b.num_blocks());
    boost::to_block_range(b, blocks.begin());
    for (auto x : blocks) h = h * 0x9E3779B97F4A7C15ULL + static_cast<std::size_t>(x) + (h >> 29);
    return h;
  }
};

}  // namespace

class Enumerator {
 public:
  using Callback = std::function<bool(const Enumeration&, std::size_t)>;

  Enumerator(const Signature& sig, const EnumerationLimits& limits, const Model* m1, const Model* m2,
             const Callback& on_new)
      : limits_(limits), m1_(m1), m2_(m2), on_new_(on_new) {
    for (const auto& [name, mu] : sig) {
      out_.connective_names.push_back(name);
      conns_.push_back(&mu);
    }
  }

  Enumeration run(const std::vector<std::string>& preds, unsigned depth) {
    // Level 0: atoms, then nullary connectives.
    std::vector<std::string> atoms;
    std::set<std::string> seen_atoms;
    for (const auto& p : preds) {
      if (!detail::indexed_name(p, 'P')) throw InputError("'" + p + "' is not a predicate symbol");
      if (seen_atoms.insert(p).second) atoms.push_back(p);
    }
    for (const auto& p : atoms) {
      Enumeration::Node n;
      n.atom = p;
      if (!offer(std::move(n), semantic() ? atom_vector(p) : Bits{})) return finish();
    }
    for (std::size_t c = 0; c < conns_.size(); ++c) {
      if (conns_[c]->arity() != 0) continue;
      Enumeration::Node n;
      n.connective = static_cast<int>(c);
      if (!offer(std::move(n), semantic() ? apply(c, {}) : Bits{})) return finish();
    }
    out_.depth_reached = 0;
    std::size_t old_end = 0;
    for (unsigned d = 1; d <= depth; ++d) {
      const std::size_t level_end = out_.nodes_.size();
      if (!level(d, old_end, level_end)) return finish();
      out_.depth_reached = d;
      if (semantic() && out_.nodes_.size() == level_end) {
        out_.closed = true;
        break;
      }
      old_end = level_end;
    }
    return finish();
  }

 private:
  bool semantic() const { return m1_ != nullptr; }

  Enumeration finish() { return std::move(out_); }

  Bits atom_vector(const std::string& p) const { return join(m1_->extension(p), m2_->extension(p)); }

  Bits join(const Bits& a, const Bits& b) const {
    Bits v(a.size() + b.size());
    for (auto i = a.find_first(); i != Bits::npos; i = a.find_next(i)) v.set(i);
    for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) v.set(a.size() + i);
    return v;
  }

  Bits apply(std::size_t c, const std::vector<std::uint32_t>& kids) const {
    const std::size_t n1 = m1_->size(), n2 = m2_->size();
    std::vector<Bits> a1, a2;
    for (auto k : kids) {
      const Bits& v = out_.vectors_[k];
      Bits x(n1), y(n2);
      for (std::size_t i = 0; i < n1; ++i) x[i] = v[i];
      for (std::size_t i = 0; i < n2; ++i) y[i] = v[n1 + i];
      a1.push_back(std::move(x));
      a2.push_back(std::move(y));
    }
    return join(apply_connective(*m1_, *conns_[c], a1), apply_connective(*m2_, *conns_[c], a2));
  }

  // Returns false when enumeration must end (budget or callback).
  bool offer(Enumeration::Node n, Bits v) {
    if (semantic()) {
      if (index_.count(v)) return true;
      index_.emplace(v, out_.nodes_.size());
      out_.vectors_.push_back(std::move(v));
    }
    if (out_.nodes_.size() >= limits_.max_formulas) {
      if (semantic()) {
        out_.vectors_.pop_back();
      }
      out_.status = EnumStatus::budget_exhausted;
      return false;
    }
    out_.nodes_.push_back(std::move(n));
    if (on_new_ && on_new_(out_, out_.nodes_.size() - 1)) {
      out_.status = EnumStatus::stopped;
      return false;
    }
    return true;
  }

  // All applications over nodes [0, level_end) using at least one node
  // from [old_end, level_end).
  bool level(unsigned d, std::size_t old_end, std::size_t level_end) {
    if (level_end == 0) return true;
    for (std::size_t c = 0; c < conns_.size(); ++c) {
      const unsigned k = conns_[c]->arity();
      if (k == 0) continue;
      std::vector<std::uint32_t> tuple(k, 0);
      for (;;) {
        bool fresh = false;
        for (auto t : tuple) fresh = fresh || t >= old_end;
        if (fresh) {
          if (++out_.candidates > limits_.max_candidates) {
            out_.status = EnumStatus::budget_exhausted;
            return false;
          }
          Enumeration::Node n;
          n.connective = static_cast<int>(c);
          n.kids = tuple;
          n.depth = d;
          Bits v = semantic() ? apply(c, tuple) : Bits{};
          if (!offer(std::move(n), std::move(v))) return false;
        }
        // Next tuple in lexicographic order.
        std::size_t pos = k;
        while (pos > 0) {
          --pos;
          if (++tuple[pos] < level_end) break;
          tuple[pos] = 0;
          if (pos == 0) {
            pos = k + 1;
            break;
          }
        }
        if (pos == k + 1) break;
      }
    }
    return true;
  }

  EnumerationLimits limits_;
  const Model* m1_;
  const Model* m2_;
  const Callback& on_new_;
  std::vector<const GuardedConnective*> conns_;
  std::unordered_map<Bits, std::size_t, BitsHash> index_;
  Enumeration out_;
};

Enumeration enumerate_fragment(const Signature& sig, const std::vector<std::string>& preds, unsigned depth,
                               const EnumerationLimits& limits) {
  const Enumerator::Callback none;
  return Enumerator(sig, limits, nullptr, nullptr, none).run(preds, depth);
}

Enumeration enumerate_fragment(const Signature& sig, const std::vector<std::string>& preds, unsigned depth,
                               const Model& m1, const Model& m2, const EnumerationLimits& limits,
                               const std::function<bool(const Enumeration&, std::size_t)>& on_new) {
  return Enumerator(sig, limits, &m1, &m2, on_new).run(preds, depth);
}

Distinction distinguishing_formula(const Signature& sig, const PointedModel& p1, const PointedModel& p2,
                                   unsigned depth, std::vector<std::string> preds, const EnumerationLimits& limits) {
  if (p1.point >= p1.model.size() || p2.point >= p2.model.size()) throw PreconditionError("point outside the domain");
  if (preds.empty()) {
    std::set<std::string> all;
    for (const auto& p : p1.model.predicate_symbols()) all.insert(p);
    for (const auto& p : p2.model.predicate_symbols()) all.insert(p);
    preds.assign(all.begin(), all.end());
  }
  const std::size_t a = p1.point, b = p1.model.size() + p2.point;
  std::optional<std::size_t> hit;
  auto on_new = [&](const Enumeration& e, std::size_t i) {
    const Bits& v = e.vector(i);
    if (v.test(a) && !v.test(b)) {
      hit = i;
      return true;
    }
    return false;
  };
  Enumeration e = enumerate_fragment(sig, preds, depth, p1.model, p2.model, limits, on_new);
  Distinction out;
  if (hit) {
    out.formula = e.formula(*hit);
    out.status = EnumStatus::complete;
  } else {
    out.status = e.status;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Distribution laws

FragmentFormula fold(const Signature& sig, FoldMode mode, const std::vector<FragmentFormula>& psis) {
  if (psis.empty()) throw PreconditionError("fold needs at least one formula");
  const std::string op = mode == FoldMode::conjunction ? sig.conj_name() : sig.disj_name();
  FragmentFormula acc = psis.front();
  for (std::size_t i = 1; i < psis.size(); ++i) acc = FragmentFormula::apply(op, {std::move(acc), psis[i]});
  return acc;
}

static const GuardedConnective& degree1_modality(const Signature& sig, const std::string& name) {
  const GuardedConnective& mu = sig.at(name);
  const ConnectiveClass c = classify_connective(mu);
  if (mu.degree() != 1 || !c.is_modality) throw PreconditionError("'" + name + "' is not a degree-1 modality");
  return mu;
}

static FragmentFormula same_everywhere(const std::string& mu, unsigned arity, const FragmentFormula& psi) {
  return FragmentFormula::apply(mu, std::vector<FragmentFormula>(arity, psi));
}

FragmentFormula distribution_lhs(const Signature& sig, const std::string& name,
                                 const std::vector<FragmentFormula>& psis, FoldMode mode) {
  const GuardedConnective& mu = degree1_modality(sig, name);
  std::vector<FragmentFormula> parts;
  for (const auto& p : psis) parts.push_back(same_everywhere(name, mu.arity(), p));
  return fold(sig, mode, parts);
}

FragmentFormula collapse_fold(const Signature& sig, const std::string& name,
                                const std::vector<FragmentFormula>& psis, FoldMode mode) {
  const GuardedConnective& mu = degree1_modality(sig, name);
  const bool universal = mu.blocks()[0].quantifier == Quantifier::forall;
  const FoldMode expected = universal ? FoldMode::conjunction : FoldMode::disjunction;
  if (mode != expected)
    throw PreconditionError(std::string(universal ? "forall" : "exists") + "-guarded modalities distribute over " +
                            (universal ? "conjunction" : "disjunction"));
  const bool anti = classify(mu.core()).is_antimonotone;
  FoldMode inner = mode;
  if (anti) inner = mode == FoldMode::conjunction ? FoldMode::disjunction : FoldMode::conjunction;
  return same_everywhere(name, mu.arity(), fold(sig, inner, psis));
}

FragmentFormula unify_args(const Signature& sig, const std::string& name, const std::vector<FragmentFormula>& psis) {
  const GuardedConnective& mu = degree1_modality(sig, name);
  if (psis.size() != mu.arity()) throw PreconditionError("unify_args needs one formula per argument");
  const MonotoneDnf lattice = monotone_lattice_expr(mu.core());
  std::vector<FragmentFormula> terms;
  for (const auto& clause : lattice.positive_clauses) {
    std::vector<FragmentFormula> lits;
    for (unsigned i : clause) lits.push_back(psis[i - 1]);
    terms.push_back(fold(sig, FoldMode::conjunction, lits));
  }
  return same_everywhere(name, mu.arity(), fold(sig, FoldMode::disjunction, terms));
}

}  // namespace asimkit
