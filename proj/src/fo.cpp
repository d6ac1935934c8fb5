#include "asimkit/fo.hpp"

#include <algorithm>
#include <utility>

#include "asimkit/error.hpp"
#include "asimkit/model.hpp"
#include "lexer.hpp"

namespace asimkit {

using detail::Lexer;
using detail::Tok;
using K = FoFormula::Kind;

FoFormula FoFormula::top() { return FoFormula{}; }

FoFormula FoFormula::bot() {
  FoFormula f;
  f.kind = K::bot;
  return f;
}

FoFormula FoFormula::pred(std::string p, std::string v) {
  FoFormula f;
  f.kind = K::pred;
  f.symbol = std::move(p);
  f.vars = {std::move(v)};
  return f;
}

FoFormula FoFormula::rel(std::string r, std::string v1, std::string v2) {
  FoFormula f;
  f.kind = K::rel;
  f.symbol = std::move(r);
  f.vars = {std::move(v1), std::move(v2)};
  return f;
}

FoFormula FoFormula::negation(FoFormula a) {
  FoFormula f;
  f.kind = K::neg;
  f.kids.push_back(std::move(a));
  return f;
}

static FoFormula nary(K k, std::vector<FoFormula> parts) {
  std::vector<FoFormula> flat;
  for (auto& p : parts) {
    if (p.kind == k) {
      for (auto& q : p.kids) flat.push_back(std::move(q));
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return k == K::conj ? FoFormula::top() : FoFormula::bot();
  if (flat.size() == 1) return std::move(flat.front());
  FoFormula f;
  f.kind = k;
  f.kids = std::move(flat);
  return f;
}

FoFormula FoFormula::conjunction(std::vector<FoFormula> parts) { return nary(K::conj, std::move(parts)); }
FoFormula FoFormula::disjunction(std::vector<FoFormula> parts) { return nary(K::disj, std::move(parts)); }

static FoFormula binary(K k, FoFormula a, FoFormula b) {
  FoFormula f;
  f.kind = k;
  f.kids.push_back(std::move(a));
  f.kids.push_back(std::move(b));
  return f;
}

FoFormula FoFormula::implies(FoFormula a, FoFormula b) { return binary(K::imp, std::move(a), std::move(b)); }
FoFormula FoFormula::iff(FoFormula a, FoFormula b) { return binary(K::iff, std::move(a), std::move(b)); }

static FoFormula quantified(K k, std::string v, FoFormula body) {
  FoFormula f;
  f.kind = k;
  f.vars = {std::move(v)};
  f.kids.push_back(std::move(body));
  return f;
}

FoFormula FoFormula::forall(std::string v, FoFormula body) { return quantified(K::forall, std::move(v), std::move(body)); }
FoFormula FoFormula::exists(std::string v, FoFormula body) { return quantified(K::exists, std::move(v), std::move(body)); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool is_keyword(const std::string& s) { return s == "forall" || s == "exists" || s == "T" || s == "F"; }

class FoParser {
 public:
  explicit FoParser(std::string_view text) : lex_(text) {}

  FoFormula parse() {
    FoFormula f = formula();
    if (!lex_.at(Tok::end)) lex_.fail("unexpected " + lex_.found());
    return f;
  }

 private:
  FoFormula formula() { return iff(); }

  FoFormula iff() {
    FoFormula lhs = imp();
    while (lex_.accept(Tok::iff)) lhs = FoFormula::iff(std::move(lhs), imp());
    return lhs;
  }

  FoFormula imp() {
    FoFormula lhs = disj();
    if (lex_.accept(Tok::arrow)) return FoFormula::implies(std::move(lhs), imp());
    return lhs;
  }

  FoFormula disj() {
    std::vector<FoFormula> parts{conj()};
    while (lex_.accept(Tok::bar)) parts.push_back(conj());
    return parts.size() == 1 ? std::move(parts.front()) : FoFormula::disjunction(std::move(parts));
  }

  FoFormula conj() {
    std::vector<FoFormula> parts{unary()};
    while (lex_.accept(Tok::amp)) parts.push_back(unary());
    return parts.size() == 1 ? std::move(parts.front()) : FoFormula::conjunction(std::move(parts));
  }

  FoFormula unary() {
    if (lex_.accept(Tok::tilde)) return FoFormula::negation(unary());
    if (lex_.at_ident("forall") || lex_.at_ident("exists")) {
      const bool universal = lex_.next().text == "forall";
      std::string v = variable();
      FoFormula body = formula();
      return universal ? FoFormula::forall(std::move(v), std::move(body))
                       : FoFormula::exists(std::move(v), std::move(body));
    }
    return atom();
  }

  std::string variable() {
    if (!lex_.at(Tok::ident) || is_keyword(lex_.peek().text)) lex_.fail("expected a variable, found " + lex_.found());
    return lex_.next().text;
  }

  FoFormula atom() {
    if (lex_.accept(Tok::lparen)) {
      FoFormula f = formula();
      lex_.expect(Tok::rparen);
      return f;
    }
    if (!lex_.at(Tok::ident)) lex_.fail("expected a formula, found " + lex_.found());
    const std::string word = lex_.peek().text;
    if (word == "T") {
      lex_.next();
      return FoFormula::top();
    }
    if (word == "F") {
      lex_.next();
      return FoFormula::bot();
    }
    if (detail::indexed_name(word, 'P')) {
      lex_.next();
      lex_.expect(Tok::lparen);
      std::string v = variable();
      lex_.expect(Tok::rparen);
      return FoFormula::pred(word, std::move(v));
    }
    if (detail::indexed_name(word, 'R')) {
      lex_.next();
      lex_.expect(Tok::lparen);
      std::string v1 = variable();
      lex_.expect(Tok::comma);
      std::string v2 = variable();
      lex_.expect(Tok::rparen);
      return FoFormula::rel(word, std::move(v1), std::move(v2));
    }
    lex_.fail("expected P<k>(v), R<k>(v,w), T, F or a quantifier, found " + lex_.found());
  }

  Lexer lex_;
};

int precedence(K k) {
  switch (k) {
    case K::forall:
    case K::exists: return 0;
    case K::iff: return 1;
    case K::imp: return 2;
    case K::disj: return 3;
    case K::conj: return 4;
    case K::neg: return 5;
    default: return 6;
  }
}

void render(const FoFormula& f, std::string& out, int context) {
  const int p = precedence(f.kind);
  const bool paren = p < context || (p == context && (f.kind == K::imp || f.kind == K::iff));
  if (paren) out.push_back('(');
  switch (f.kind) {
    case K::top: out += "T"; break;
    case K::bot: out += "F"; break;
    case K::pred: out += f.symbol + "(" + f.vars[0] + ")"; break;
    case K::rel: out += f.symbol + "(" + f.vars[0] + "," + f.vars[1] + ")"; break;
    case K::neg:
      out.push_back('~');
      render(f.kids[0], out, p);
      break;
    case K::conj:
    case K::disj:
      for (std::size_t i = 0; i < f.kids.size(); ++i) {
        if (i) out += f.kind == K::conj ? " & " : " | ";
        render(f.kids[i], out, p + 1);
      }
      break;
    case K::imp:
    case K::iff:
      render(f.kids[0], out, p + 1);
      out += f.kind == K::imp ? " -> " : " <-> ";
      render(f.kids[1], out, p + 1);
      break;
    case K::forall:
    case K::exists:
      out += f.kind == K::forall ? "forall " : "exists ";
      out += f.vars[0];
      out += " (";
      render(f.kids[0], out, 0);
      out += ")";
      break;
  }
  if (paren) out.push_back(')');
}

void collect_free(const FoFormula& f, std::vector<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind) {
    case K::pred:
    case K::rel:
      for (const auto& v : f.vars)
        if (std::find(bound.begin(), bound.end(), v) == bound.end()) out.insert(v);
      return;
    case K::forall:
    case K::exists:
      bound.push_back(f.vars[0]);
      collect_free(f.kids[0], bound, out);
      bound.pop_back();
      return;
    default:
      for (const auto& k : f.kids) collect_free(k, bound, out);
  }
}

void collect_all(const FoFormula& f, std::set<std::string>& out) {
  for (const auto& v : f.vars) out.insert(v);
  for (const auto& k : f.kids) collect_all(k, out);
}

using Env = std::vector<std::pair<const std::string*, std::size_t>>;

std::size_t lookup(const Env& env, const std::string& v) {
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (*it->first == v) return it->second;
  throw PreconditionError("unassigned free variable '" + v + "'");
}

bool eval(const Model& m, Env& env, const FoFormula& f) {
  switch (f.kind) {
    case K::top: return true;
    case K::bot: return false;
    case K::pred: return m.holds(f.symbol, lookup(env, f.vars[0]));
    case K::rel: return m.related(f.symbol, lookup(env, f.vars[0]), lookup(env, f.vars[1]));
    case K::neg: return !eval(m, env, f.kids[0]);
    case K::conj:
      for (const auto& k : f.kids)
        if (!eval(m, env, k)) return false;
      return true;
    case K::disj:
      for (const auto& k : f.kids)
        if (eval(m, env, k)) return true;
      return false;
    case K::imp: return !eval(m, env, f.kids[0]) || eval(m, env, f.kids[1]);
    case K::iff: return eval(m, env, f.kids[0]) == eval(m, env, f.kids[1]);
    case K::forall:
    case K::exists: {
      const bool universal = f.kind == K::forall;
      env.emplace_back(&f.vars[0], 0);
      bool result = universal;
      for (std::size_t a = 0; a < m.size(); ++a) {
        env.back().second = a;
        if (eval(m, env, f.kids[0]) != universal) {
          result = !universal;
          break;
        }
      }
      env.pop_back();
      return result;
    }
  }
  return false;
}

}  // namespace

FoFormula parse_fo(std::string_view text) { return FoParser(text).parse(); }

std::string to_string(const FoFormula& phi) {
  std::string out;
  render(phi, out, 0);
  return out;
}

std::set<std::string> free_vars(const FoFormula& phi) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free(phi, bound, out);
  return out;
}

std::set<std::string> all_vars(const FoFormula& phi) {
  std::set<std::string> out;
  collect_all(phi, out);
  return out;
}

FoFormula rename_free(const FoFormula& phi, const std::string& from, const std::string& to) {
  if ((phi.kind == K::forall || phi.kind == K::exists) && phi.vars[0] == from) return phi;
  FoFormula out = phi;
  if (phi.kind == K::pred || phi.kind == K::rel) {
    for (auto& v : out.vars)
      if (v == from) v = to;
    return out;
  }
  for (auto& k : out.kids) k = rename_free(k, from, to);
  return out;
}

bool eval_fo(const Model& m, const Assignment& alpha, const FoFormula& phi) {
  Env env;
  for (const auto& [v, a] : alpha) {
    if (a >= m.size()) throw PreconditionError("assignment of '" + v + "' is outside the domain");
    env.emplace_back(&v, a);
  }
  return eval(m, env, phi);
}

Bits eval_fo_set(const Model& m, const FoFormula& phi, const std::string& var) {
  Bits out(m.size());
  Env env;
  env.emplace_back(&var, 0);
  for (std::size_t a = 0; a < m.size(); ++a) {
    env[0].second = a;
    out[a] = eval(m, env, phi);
  }
  return out;
}

}  // namespace asimkit
