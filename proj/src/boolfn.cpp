#include "asimkit/boolfn.hpp"

#include <algorithm>
#include <optional>

#include "asimkit/error.hpp"
#include "lexer.hpp"

namespace asimkit {

using detail::Lexer;
using detail::Tok;

// ---------------------------------------------------------------------------
// TruthTable

TruthTable::TruthTable() : arity_(0), outputs_(1) {}

TruthTable::TruthTable(unsigned arity, Bits outputs) : arity_(arity), outputs_(std::move(outputs)) {
  if (arity > kMaxArity)
    throw PreconditionError("truth table arity " + std::to_string(arity) + " exceeds the cap of " +
                            std::to_string(kMaxArity));
  if (outputs_.size() != (std::size_t{1} << arity))
    throw PreconditionError("truth table of arity " + std::to_string(arity) + " needs " +
                            std::to_string(std::size_t{1} << arity) + " outputs, got " +
                            std::to_string(outputs_.size()));
}

TruthTable TruthTable::constant(unsigned arity, bool value) {
  Bits out(std::size_t{1} << std::min(arity, kMaxArity + 1));
  if (value) out.set();
  return TruthTable(arity, std::move(out));
}

TruthTable TruthTable::variable(unsigned arity, unsigned i) {
  if (i < 1 || i > arity) throw PreconditionError("variable index out of range");
  Bits out(std::size_t{1} << arity);
  const std::size_t mask = std::size_t{1} << (arity - i);
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = (t & mask) != 0;
  return TruthTable(arity, std::move(out));
}

TruthTable TruthTable::from_word(unsigned arity, std::uint64_t word) {
  if (arity > 6) throw PreconditionError("from_word supports arity at most 6");
  Bits out(std::size_t{1} << arity);
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = (word >> t) & 1U;
  return TruthTable(arity, std::move(out));
}

TruthTable TruthTable::negated() const {
  Bits out = outputs_;
  out.flip();
  return TruthTable(arity_, std::move(out));
}

std::string TruthTable::to_string() const {
  std::string s;
  s.reserve(outputs_.size());
  for (std::size_t t = 0; t < outputs_.size(); ++t) s.push_back(outputs_[t] ? '1' : '0');
  return s;
}

// ---------------------------------------------------------------------------
// BoolExpr

BoolExpr BoolExpr::make_const(bool v) {
  BoolExpr e;
  e.kind = Kind::constant;
  e.value = v;
  return e;
}

BoolExpr BoolExpr::make_var(unsigned i) {
  BoolExpr e;
  e.kind = Kind::var;
  e.var = i;
  return e;
}

BoolExpr BoolExpr::make_not(BoolExpr a) {
  BoolExpr e;
  e.kind = Kind::neg;
  e.kids.push_back(std::move(a));
  return e;
}

static BoolExpr make_nary(BoolExpr::Kind k, std::vector<BoolExpr> es, bool unit) {
  if (es.empty()) return BoolExpr::make_const(unit);
  if (es.size() == 1) return std::move(es.front());
  BoolExpr e;
  e.kind = k;
  e.kids = std::move(es);
  return e;
}

BoolExpr BoolExpr::make_and(std::vector<BoolExpr> es) { return make_nary(Kind::conj, std::move(es), true); }
BoolExpr BoolExpr::make_or(std::vector<BoolExpr> es) { return make_nary(Kind::disj, std::move(es), false); }

BoolExpr BoolExpr::make_binary(Kind k, BoolExpr a, BoolExpr b) {
  BoolExpr e;
  e.kind = k;
  e.kids.push_back(std::move(a));
  e.kids.push_back(std::move(b));
  return e;
}

unsigned BoolExpr::max_var() const {
  unsigned m = kind == Kind::var ? var : 0;
  for (const auto& k : kids) m = std::max(m, k.max_var());
  return m;
}

bool BoolExpr::eval(std::size_t tuple, unsigned arity) const {
  switch (kind) {
    case Kind::constant: return value;
    case Kind::var: return (tuple >> (arity - var)) & 1U;
    case Kind::neg: return !kids[0].eval(tuple, arity);
    case Kind::conj:
      return std::all_of(kids.begin(), kids.end(), [&](const BoolExpr& k) { return k.eval(tuple, arity); });
    case Kind::disj:
      return std::any_of(kids.begin(), kids.end(), [&](const BoolExpr& k) { return k.eval(tuple, arity); });
    case Kind::imp: return !kids[0].eval(tuple, arity) || kids[1].eval(tuple, arity);
    case Kind::iff: return kids[0].eval(tuple, arity) == kids[1].eval(tuple, arity);
  }
  return false;
}

namespace {

class BoolParser {
 public:
  explicit BoolParser(std::string_view text) : lex_(text) {}

  BoolExpr parse() {
    BoolExpr e = iff();
    if (!lex_.at(Tok::end)) lex_.fail("unexpected " + lex_.found());
    return e;
  }

 private:
  BoolExpr iff() {
    BoolExpr lhs = imp();
    while (lex_.accept(Tok::iff)) lhs = BoolExpr::make_binary(BoolExpr::Kind::iff, std::move(lhs), imp());
    return lhs;
  }

  BoolExpr imp() {
    BoolExpr lhs = disj();
    if (lex_.accept(Tok::arrow)) return BoolExpr::make_binary(BoolExpr::Kind::imp, std::move(lhs), imp());
    return lhs;
  }

  BoolExpr disj() {
    std::vector<BoolExpr> parts{conj()};
    while (lex_.accept(Tok::bar)) parts.push_back(conj());
    return BoolExpr::make_or(std::move(parts));
  }

  BoolExpr conj() {
    std::vector<BoolExpr> parts{unary()};
    while (lex_.accept(Tok::amp)) parts.push_back(unary());
    return BoolExpr::make_and(std::move(parts));
  }

  BoolExpr unary() {
    if (lex_.accept(Tok::tilde)) return BoolExpr::make_not(unary());
    return atom();
  }

  BoolExpr atom() {
    if (lex_.accept(Tok::lparen)) {
      BoolExpr e = iff();
      lex_.expect(Tok::rparen);
      return e;
    }
    if (lex_.at(Tok::ident)) {
      const auto& text = lex_.peek().text;
      if (text == "T") {
        lex_.next();
        return BoolExpr::make_const(true);
      }
      if (text == "F") {
        lex_.next();
        return BoolExpr::make_const(false);
      }
      unsigned i = detail::indexed_name(text, 'p');
      if (i == 0) lex_.fail("expected p<k>, T or F, found " + lex_.found());
      if (i > TruthTable::kMaxArity)
        lex_.fail("variable " + text + " exceeds the arity cap of " + std::to_string(TruthTable::kMaxArity));
      lex_.next();
      return BoolExpr::make_var(i);
    }
    lex_.fail("expected an operand, found " + lex_.found());
  }

  Lexer lex_;
};

int precedence(BoolExpr::Kind k) {
  switch (k) {
    case BoolExpr::Kind::iff: return 1;
    case BoolExpr::Kind::imp: return 2;
    case BoolExpr::Kind::disj: return 3;
    case BoolExpr::Kind::conj: return 4;
    case BoolExpr::Kind::neg: return 5;
    default: return 6;
  }
}

void render(const BoolExpr& e, std::string& out, int context) {
  using K = BoolExpr::Kind;
  const int p = precedence(e.kind);
  // Chains of -> and <-> are always bracketed when nested, to keep the
  // associativity explicit to a human reader.
  const bool paren = p < context || (p == context && (e.kind == K::imp || e.kind == K::iff));
  if (paren) out.push_back('(');
  switch (e.kind) {
    case K::constant: out += e.value ? "T" : "F"; break;
    case K::var: out += "p" + std::to_string(e.var); break;
    case K::neg:
      out.push_back('~');
      render(e.kids[0], out, p);
      break;
    case K::conj:
    case K::disj: {
      const char* op = e.kind == K::conj ? " & " : " | ";
      for (std::size_t i = 0; i < e.kids.size(); ++i) {
        if (i) out += op;
        render(e.kids[i], out, p + 1);
      }
      break;
    }
    case K::imp:
    case K::iff:
      render(e.kids[0], out, p + 1);
      out += e.kind == K::imp ? " -> " : " <-> ";
      render(e.kids[1], out, p + 1);
      break;
  }
  if (paren) out.push_back(')');
}

}  // namespace

BoolExpr parse_bool_expr(std::string_view text) { return BoolParser(text).parse(); }

std::string to_string(const BoolExpr& e) {
  std::string out;
  render(e, out, 0);
  return out;
}

TruthTable table_of(const BoolExpr& e, unsigned arity) {
  if (e.max_var() > arity) throw PreconditionError("expression mentions a variable above the arity");
  Bits out(std::size_t{1} << arity);
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = e.eval(t, arity);
  return TruthTable(arity, std::move(out));
}

TruthTable from_expr(std::string_view text) {
  BoolExpr e = parse_bool_expr(text);
  return table_of(e, e.max_var());
}

// ---------------------------------------------------------------------------
// Classification

namespace {

// strict_below[x]: some tuple strictly below x has output `value`.
std::vector<char> strictly_below(const TruthTable& f, bool value) {
  const std::size_t n = f.size();
  std::vector<char> r(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t rest = x; rest; rest &= rest - 1) {
      std::size_t y = x ^ (rest & (~rest + 1));
      if (f[y] == value || r[y]) {
        r[x] = 1;
        break;
      }
    }
  }
  return r;
}

std::vector<char> strictly_above(const TruthTable& f, bool value) {
  const std::size_t n = f.size();
  const std::size_t full = n - 1;
  std::vector<char> r(n, 0);
  for (std::size_t x = n; x-- > 0;) {
    for (std::size_t rest = full & ~x; rest; rest &= rest - 1) {
      std::size_t y = x | (rest & (~rest + 1));
      if (f[y] == value || r[y]) {
        r[x] = 1;
        break;
      }
    }
  }
  return r;
}

// Middle of a chain value / !value / value, highest index first.
std::optional<std::size_t> chain_middle(const TruthTable& f, bool outer) {
  auto below = strictly_below(f, outer);
  auto above = strictly_above(f, outer);
  for (std::size_t b = f.size(); b-- > 0;)
    if (f[b] != outer && below[b] && above[b]) return b;
  return std::nullopt;
}

}  // namespace

const char* class_label(const BoolClass& c) {
  if (c.is_constant) return "constant";
  if (c.is_monotone) return "monotone";
  if (c.is_antimonotone) return "anti-monotone";
  return "rest";
}

BoolClass classify(const TruthTable& f) {
  BoolClass c;
  const std::size_t n = f.size();
  c.is_constant = f.is_constant();
  bool mono = true, anti = true;
  for (std::size_t x = 0; x < n && (mono || anti); ++x) {
    for (unsigned i = 1; i <= f.arity(); ++i) {
      const std::size_t m = f.var_mask(i);
      if (x & m) continue;
      const bool lo = f[x], hi = f[x | m];
      if (lo && !hi) mono = false;
      if (!lo && hi) anti = false;
    }
  }
  c.is_monotone = mono;
  c.is_antimonotone = anti;
  c.is_rest = !mono && !anti;
  if (c.is_rest) {
    c.is_tft = chain_middle(f, true).has_value();
    c.is_ftf = chain_middle(f, false).has_value();
  }
  c.weakly_forall_special = !c.is_tft;
  c.weakly_exists_special = !c.is_ftf;
  c.forall_special = c.is_rest && !c.is_tft;
  c.exists_special = c.is_rest && !c.is_ftf;
  return c;
}

// ---------------------------------------------------------------------------
// Substitutions

const char* slot_name(Slot s) {
  switch (s) {
    case Slot::p1: return "P1";
    case Slot::p2: return "P2";
    case Slot::p1_or_p2: return "P1|P2";
    case Slot::p1_and_p2: return "P1&P2";
    case Slot::top: return "T";
    case Slot::bot: return "F";
  }
  return "?";
}

std::string to_string(const Substitution& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += slot_name(s[i]);
  }
  out += ")";
  return out;
}

static bool slot_value(Slot s, bool q1, bool q2) {
  switch (s) {
    case Slot::p1: return q1;
    case Slot::p2: return q2;
    case Slot::p1_or_p2: return q1 || q2;
    case Slot::p1_and_p2: return q1 && q2;
    case Slot::top: return true;
    case Slot::bot: return false;
  }
  return false;
}

TruthTable apply_substitution(const TruthTable& f, const Substitution& s) {
  if (s.size() != f.arity())
    throw PreconditionError("substitution of length " + std::to_string(s.size()) +
                            " applied to a function of arity " + std::to_string(f.arity()));
  Bits out(4);
  for (std::size_t q = 0; q < 4; ++q) {
    const bool q1 = q & 2U, q2 = q & 1U;
    std::size_t tuple = 0;
    for (unsigned i = 1; i <= f.arity(); ++i)
      if (slot_value(s[i - 1], q1, q2)) tuple |= f.var_mask(i);
    out[q] = f[tuple];
  }
  return TruthTable(2, std::move(out));
}

namespace {

// Which slot each variable receives given the witnessing chain a < b < c.
Substitution chain_substitution(const TruthTable& f, std::size_t a, std::size_t b, std::size_t c, Slot first,
                                Slot second) {
  Substitution s(f.arity());
  for (unsigned i = 1; i <= f.arity(); ++i) {
    const std::size_t m = f.var_mask(i);
    if (a & m)
      s[i - 1] = Slot::top;
    else if (b & m)
      s[i - 1] = first;
    else if (c & m)
      s[i - 1] = second;
    else
      s[i - 1] = Slot::bot;
  }
  return s;
}

struct Chain {
  std::size_t a, b, c;
};

// For the chosen middle b: the lowest-index tuple strictly below b and the
// highest-index tuple strictly above b carrying the outer value.
Chain locate_chain(const TruthTable& f, bool outer) {
  auto mid = chain_middle(f, outer);
  const std::size_t b = *mid;
  const std::size_t full = f.size() - 1;
  std::optional<std::size_t> a, c;
  for (std::size_t y = b;; y = (y - 1) & b) {
    if (y != b && f[y] == outer && (!a || y < *a)) a = y;
    if (y == 0) break;
  }
  const std::size_t free = full & ~b;
  for (std::size_t s = free;; s = (s - 1) & free) {
    const std::size_t y = b | s;
    if (y != b && f[y] == outer && (!c || y > *c)) c = y;
    if (s == 0) break;
  }
  return {*a, b, *c};
}

}  // namespace

Substitution tft_substitution(const TruthTable& f) {
  if (!classify(f).is_tft) throw PreconditionError("tft_substitution needs a TFT function");
  const Chain ch = locate_chain(f, true);
  const std::size_t d = ch.a | (ch.c & ~ch.b);
  if (f[d]) return chain_substitution(f, ch.a, ch.b, ch.c, Slot::p1, Slot::p2);
  return chain_substitution(f, ch.a, ch.b, ch.c, Slot::p1_or_p2, Slot::p2);
}

Substitution ftf_substitution(const TruthTable& f) {
  if (!classify(f).is_ftf) throw PreconditionError("ftf_substitution needs an FTF function");
  const Chain ch = locate_chain(f, false);
  const std::size_t d = ch.a | (ch.c & ~ch.b);
  if (!f[d]) return chain_substitution(f, ch.a, ch.b, ch.c, Slot::p1, Slot::p2);
  return chain_substitution(f, ch.a, ch.b, ch.c, Slot::p1, Slot::p1_and_p2);
}

std::pair<Substitution, Substitution> rest_projections(const TruthTable& f) {
  if (!classify(f).is_rest) throw PreconditionError("rest_projections needs a rest function");
  std::optional<Substitution> up, down;
  for (std::size_t x = 0; x < f.size(); ++x) {
    for (unsigned i = 1; i <= f.arity(); ++i) {
      const std::size_t m = f.var_mask(i);
      if (x & m || f[x] == f[x | m]) continue;
      Substitution s(f.arity(), Slot::bot);
      for (unsigned j = 1; j <= f.arity(); ++j)
        if (x & f.var_mask(j)) s[j - 1] = Slot::top;
      s[i - 1] = Slot::p1;
      auto& slot = f[x] ? down : up;
      if (!slot || s < *slot) slot = std::move(s);
    }
  }
  return {*up, *down};
}

// ---------------------------------------------------------------------------
// Normal forms

namespace {

std::vector<unsigned> vars_where(const TruthTable& f, std::size_t tuple, bool value) {
  std::vector<unsigned> vs;
  for (unsigned i = 1; i <= f.arity(); ++i)
    if (f.arg(tuple, i) == value) vs.push_back(i);
  return vs;
}

bool subset(std::size_t a, std::size_t b) { return (a & ~b) == 0; }

// Minimal (or maximal) members of a set of tuples under the pointwise order.
std::vector<std::size_t> extremal(const std::vector<std::size_t>& xs, bool minimal) {
  std::vector<std::size_t> out;
  for (std::size_t x : xs) {
    bool dominated = false;
    for (std::size_t y : xs) {
      if (y == x) continue;
      if (minimal ? subset(y, x) : subset(x, y)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(x);
  }
  return out;
}

}  // namespace

TruthTable eval_dnf(const MonotoneDnf& form, unsigned arity) {
  Bits out(std::size_t{1} << arity);
  for (std::size_t t = 0; t < out.size(); ++t) {
    auto all = [&](const std::vector<unsigned>& cl, bool v) {
      return std::all_of(cl.begin(), cl.end(), [&](unsigned i) { return (((t >> (arity - i)) & 1U) != 0) == v; });
    };
    bool val = false;
    for (const auto& cl : form.positive_clauses) val = val || all(cl, true);
    for (const auto& cl : form.negative_clauses) val = val || all(cl, false);
    out[t] = val;
  }
  return TruthTable(arity, std::move(out));
}

TruthTable eval_cnf(const MonotoneDnf& form, unsigned arity) {
  Bits out(std::size_t{1} << arity);
  for (std::size_t t = 0; t < out.size(); ++t) {
    auto any = [&](const std::vector<unsigned>& cl, bool v) {
      return std::any_of(cl.begin(), cl.end(), [&](unsigned i) { return (((t >> (arity - i)) & 1U) != 0) == v; });
    };
    bool val = true;
    for (const auto& cl : form.positive_clauses) val = val && any(cl, true);
    for (const auto& cl : form.negative_clauses) val = val && any(cl, false);
    out[t] = val;
  }
  return TruthTable(arity, std::move(out));
}

static std::vector<BoolExpr> literals(const std::vector<unsigned>& cl, bool negative) {
  std::vector<BoolExpr> lits;
  for (unsigned i : cl) {
    BoolExpr v = BoolExpr::make_var(i);
    lits.push_back(negative ? BoolExpr::make_not(std::move(v)) : std::move(v));
  }
  return lits;
}

BoolExpr dnf_expr(const MonotoneDnf& form) {
  std::vector<BoolExpr> terms;
  for (const auto& cl : form.positive_clauses) terms.push_back(BoolExpr::make_and(literals(cl, false)));
  for (const auto& cl : form.negative_clauses) terms.push_back(BoolExpr::make_and(literals(cl, true)));
  return BoolExpr::make_or(std::move(terms));
}

BoolExpr cnf_expr(const MonotoneDnf& form) {
  std::vector<BoolExpr> terms;
  for (const auto& cl : form.positive_clauses) terms.push_back(BoolExpr::make_or(literals(cl, false)));
  for (const auto& cl : form.negative_clauses) terms.push_back(BoolExpr::make_or(literals(cl, true)));
  return BoolExpr::make_and(std::move(terms));
}

MonotoneDnf monotone_lattice_expr(const TruthTable& f) {
  const BoolClass c = classify(f);
  if (c.is_constant || c.is_rest)
    throw PreconditionError("monotone_lattice_expr needs a non-constant monotone or anti-monotone function");
  const TruthTable g = c.is_monotone ? f : f.negated();
  std::vector<std::size_t> trues;
  for (std::size_t t = 0; t < g.size(); ++t)
    if (g[t]) trues.push_back(t);
  MonotoneDnf form;
  for (std::size_t t : extremal(trues, true)) form.positive_clauses.insert(vars_where(g, t, true));
  return form;
}

MonotoneDnf non_ftf_dnf(const TruthTable& f) {
  if (f.is_constant()) throw PreconditionError("non_ftf_dnf needs a non-constant function");
  if (classify(f).is_ftf) throw PreconditionError("non_ftf_dnf needs a function that is not FTF");
  auto f_above = strictly_above(f, false);
  auto f_below = strictly_below(f, false);
  std::vector<std::size_t> upper, lower;
  for (std::size_t t = 0; t < f.size(); ++t) {
    if (!f[t]) continue;
    if (!f_above[t]) upper.push_back(t);
    if (!f_below[t]) lower.push_back(t);
  }
  MonotoneDnf form;
  for (std::size_t t : extremal(upper, true)) form.positive_clauses.insert(vars_where(f, t, true));
  for (std::size_t t : extremal(lower, false)) form.negative_clauses.insert(vars_where(f, t, false));
  return form;
}

MonotoneDnf non_tft_cnf(const TruthTable& f) {
  if (f.is_constant()) throw PreconditionError("non_tft_cnf needs a non-constant function");
  if (classify(f).is_tft) throw PreconditionError("non_tft_cnf needs a function that is not TFT");
  auto t_above = strictly_above(f, true);
  auto t_below = strictly_below(f, true);
  std::vector<std::size_t> lower, upper;
  for (std::size_t t = 0; t < f.size(); ++t) {
    if (f[t]) continue;
    if (!t_below[t]) lower.push_back(t);
    if (!t_above[t]) upper.push_back(t);
  }
  MonotoneDnf form;
  for (std::size_t t : extremal(lower, false)) form.positive_clauses.insert(vars_where(f, t, false));
  for (std::size_t t : extremal(upper, true)) form.negative_clauses.insert(vars_where(f, t, true));
  return form;
}

// ---------------------------------------------------------------------------
// Unary reductions and rendering

const char* unary_name(Unary u) {
  switch (u) {
    case Unary::top: return "T";
    case Unary::bot: return "F";
    case Unary::p1: return "p1";
    case Unary::not_p1: return "~p1";
  }
  return "?";
}

TruthTable unary_table(Unary u) {
  switch (u) {
    case Unary::top: return TruthTable::from_word(1, 0b11);
    case Unary::bot: return TruthTable::from_word(1, 0b00);
    case Unary::p1: return TruthTable::from_word(1, 0b10);
    case Unary::not_p1: return TruthTable::from_word(1, 0b01);
  }
  return {};
}

Unary diagonal(const TruthTable& f) {
  const bool lo = f[0], hi = f[f.size() - 1];
  if (lo && hi) return Unary::top;
  if (!lo && !hi) return Unary::bot;
  return hi ? Unary::p1 : Unary::not_p1;
}

BoolExpr canonical_expr(const TruthTable& f) {
  if (f.is_constant()) return BoolExpr::make_const(f[0]);
  const BoolClass c = classify(f);
  if (c.is_monotone) return dnf_expr(monotone_lattice_expr(f));
  if (c.is_antimonotone) return BoolExpr::make_not(dnf_expr(monotone_lattice_expr(f)));
  if (!c.is_ftf) return dnf_expr(non_ftf_dnf(f));
  if (!c.is_tft) return cnf_expr(non_tft_cnf(f));
  std::vector<BoolExpr> minterms;
  for (std::size_t t = 0; t < f.size(); ++t) {
    if (!f[t]) continue;
    std::vector<BoolExpr> lits;
    for (unsigned i = 1; i <= f.arity(); ++i) {
      BoolExpr v = BoolExpr::make_var(i);
      lits.push_back(f.arg(t, i) ? std::move(v) : BoolExpr::make_not(std::move(v)));
    }
    minterms.push_back(BoolExpr::make_and(std::move(lits)));
  }
  return BoolExpr::make_or(std::move(minterms));
}

}  // namespace asimkit
