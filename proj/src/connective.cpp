#include "asimkit/connective.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <utility>

#include "asimkit/error.hpp"
#include "json.hpp"
#include "lexer.hpp"

namespace asimkit {

using detail::Lexer;
using detail::Tok;

const char* quantifier_name(Quantifier q) { return q == Quantifier::forall ? "forall" : "exists"; }

GuardedConnective::GuardedConnective(std::string name, std::vector<GuardBlock> blocks, TruthTable core)
    : name_(std::move(name)), core_(std::move(core)) {
  for (auto& b : blocks) {
    if (b.guards.empty()) throw PreconditionError("guard block without guards");
    if (!blocks_.empty() && blocks_.back().quantifier == b.quantifier) {
      auto& g = blocks_.back().guards;
      g.insert(g.end(), b.guards.begin(), b.guards.end());
    } else {
      blocks_.push_back(std::move(b));
    }
  }
}

GuardedConnective GuardedConnective::renamed(std::string name) const {
  GuardedConnective c = *this;
  c.name_ = std::move(name);
  return c;
}

// ---------------------------------------------------------------------------
// Syntax

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

}  // namespace

GuardedConnective parse_connective(std::string_view text, std::string default_name) {
  std::string name = std::move(default_name);
  std::size_t offset = 0;
  if (auto def = text.find(":="); def != std::string_view::npos) {
    auto lhs = trim(text.substr(0, def));
    if (!is_identifier(lhs)) throw ParseError("expected a connective name before ':='", 0);
    name = std::string(lhs);
    offset = def + 2;
  }
  const std::string_view body = text.substr(offset);
  auto fail = [&](const std::string& msg, std::size_t pos) -> ParseError { return ParseError(msg, offset + pos); };

  std::vector<GuardBlock> blocks;
  TruthTable core;
  try {
    Lexer lex(body);
    while (lex.at_ident("forall") || lex.at_ident("exists")) {
      GuardBlock block;
      block.quantifier = lex.next().text == "forall" ? Quantifier::forall : Quantifier::exists;
      lex.expect(Tok::lbracket);
      do {
        if (!lex.at(Tok::ident) || !detail::indexed_name(lex.peek().text, 'R'))
          lex.fail("expected a relation symbol R<k>, found " + lex.found());
        block.guards.push_back(lex.next().text);
      } while (lex.accept(Tok::comma));
      lex.expect(Tok::rbracket);
      blocks.push_back(std::move(block));
    }
    if (!lex.at(Tok::lbrace)) lex.fail("expected 'forall', 'exists' or '{', found " + lex.found());
    const std::size_t open = lex.peek().pos;
    const std::size_t close = body.find('}', open + 1);
    if (close == std::string_view::npos) throw ParseError("missing '}'", body.size());
    try {
      core = from_expr(body.substr(open + 1, close - open - 1));
    } catch (const ParseError& e) {
      throw ParseError(e.detail(), open + 1 + e.position());
    }
    if (!trim(body.substr(close + 1)).empty()) throw ParseError("trailing input after '}'", close + 1);
  } catch (const ParseError& e) {
    throw fail(e.detail(), e.position());
  }
  return GuardedConnective(std::move(name), std::move(blocks), std::move(core));
}

std::string to_string(const GuardedConnective& mu) {
  std::string out;
  for (const auto& b : mu.blocks()) {
    out += quantifier_name(b.quantifier);
    out += "[";
    for (std::size_t i = 0; i < b.guards.size(); ++i) {
      if (i) out += ",";
      out += b.guards[i];
    }
    out += "] ";
  }
  if (!out.empty()) out.pop_back();
  out += "{" + to_string(canonical_expr(mu.core())) + "}";
  return out;
}

// ---------------------------------------------------------------------------
// Structure

unsigned degree(const GuardedConnective& mu) { return mu.degree(); }

GuardedConnective ancestor(const GuardedConnective& mu, unsigned i) {
  if (i >= mu.degree())
    throw PreconditionError("ancestor index " + std::to_string(i) + " out of range for degree " +
                            std::to_string(mu.degree()));
  std::vector<GuardBlock> inner(mu.blocks().end() - i, mu.blocks().end());
  return GuardedConnective(mu.name(), std::move(inner), mu.core());
}

static bool strippable(const std::vector<GuardBlock>& blocks, const TruthTable& core) {
  if (blocks.empty() || !core.is_constant()) return false;
  const bool top = core[0];
  return (blocks.back().quantifier == Quantifier::forall && top) ||
         (blocks.back().quantifier == Quantifier::exists && !top);
}

GuardedConnective normalize(const GuardedConnective& mu) {
  std::vector<GuardBlock> blocks = mu.blocks();
  while (strippable(blocks, mu.core())) blocks.pop_back();
  return GuardedConnective(mu.name(), std::move(blocks), mu.core());
}

bool is_normalized(const GuardedConnective& mu) { return !strippable(mu.blocks(), mu.core()); }

static bool q_special(const BoolClass& c, Quantifier q) {
  return q == Quantifier::forall ? c.forall_special : c.exists_special;
}

static bool weakly_q_special(const BoolClass& c, Quantifier q) {
  return q == Quantifier::forall ? c.weakly_forall_special : c.weakly_exists_special;
}

bool is_special(const GuardedConnective& mu) {
  return mu.degree() == 1 && q_special(classify(mu.core()), mu.blocks()[0].quantifier);
}

ConnectiveClass classify_connective(const GuardedConnective& mu) {
  ConnectiveClass c;
  c.degree = mu.degree();
  for (const auto& b : mu.blocks()) c.nu_prefix.push_back(b.quantifier == Quantifier::forall ? 'A' : 'E');
  c.core_class = classify(mu.core());
  const BoolClass& f = c.core_class;
  c.is_flat = c.degree <= 1;
  c.is_modality = !f.is_constant && (f.is_monotone || f.is_antimonotone);
  if (c.degree == 1) {
    c.is_special = q_special(f, mu.blocks()[0].quantifier);
    c.is_weakly_special = weakly_q_special(f, mu.blocks()[0].quantifier);
  }
  if (c.degree >= 1 && !f.is_constant) {
    // The degree-1 ancestor keeps only the innermost block.
    c.is_regular = weakly_q_special(f, mu.blocks().back().quantifier);
  }
  c.is_standard = c.is_flat || (c.degree == 2 && c.is_regular);
  return c;
}

// ---------------------------------------------------------------------------
// Signatures

Signature Signature::builtins() {
  Signature s;
  s.add(parse_connective("{p1 & p2}", "and"));
  s.add(parse_connective("{p1 | p2}", "or"));
  s.add(parse_connective("{T}", "top"));
  s.add(parse_connective("{F}", "bot"));
  return s;
}

void Signature::add(GuardedConnective mu) {
  std::string key = mu.name();
  members_.insert_or_assign(std::move(key), std::move(mu));
}

const GuardedConnective* Signature::find(std::string_view name) const {
  auto it = members_.find(name);
  return it == members_.end() ? nullptr : &it->second;
}

const GuardedConnective& Signature::at(std::string_view name) const {
  const auto* mu = find(name);
  if (!mu) throw InputError("unknown connective '" + std::string(name) + "'");
  return *mu;
}

std::optional<std::string> Signature::find_degree0(const TruthTable& core) const {
  for (const auto& [name, mu] : members_)
    if (mu.degree() == 0 && mu.core() == core) return name;
  return std::nullopt;
}

std::string Signature::conj_name() const {
  auto n = find_degree0(from_expr("p1 & p2"));
  if (!n) throw PreconditionError("signature has no conjunction");
  return *n;
}

std::string Signature::disj_name() const {
  auto n = find_degree0(from_expr("p1 | p2"));
  if (!n) throw PreconditionError("signature has no disjunction");
  return *n;
}

std::vector<std::string> Signature::names() const {
  std::vector<std::string> out;
  for (const auto& [name, mu] : members_) out.push_back(name);
  return out;
}

std::vector<std::string> Signature::relation_symbols() const {
  std::set<std::string> rels;
  for (const auto& [name, mu] : members_)
    for (const auto& b : mu.blocks()) rels.insert(b.guards.begin(), b.guards.end());
  return {rels.begin(), rels.end()};
}

Signature parse_signature(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("fragment: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("fragment: document must be an object");
  for (const auto& [key, _] : doc.items())
    if (key != "connectives" && key != "builtins") throw InputError("fragment." + key + ": unknown field");
  bool with_builtins = true;
  if (doc.contains("builtins")) {
    if (!doc["builtins"].is_boolean()) throw InputError("fragment.builtins: expected a boolean");
    with_builtins = doc["builtins"].get<bool>();
  }
  Signature sig = with_builtins ? Signature::builtins() : Signature{};
  if (doc.contains("connectives")) {
    if (!doc["connectives"].is_object()) throw InputError("fragment.connectives: expected an object");
    for (const auto& [name, body] : doc["connectives"].items()) {
      const std::string path = "fragment.connectives." + name;
      if (!is_identifier(name)) throw InputError(path + ": connective names must be identifiers");
      if (!body.is_string()) throw InputError(path + ": expected a connective string");
      GuardedConnective mu;
      try {
        mu = parse_connective(body.get<std::string>(), name);
      } catch (const ParseError& e) {
        throw InputError(path + ": " + e.what());
      }
      if (mu.name() != name) throw InputError(path + ": body names a different connective '" + mu.name() + "'");
      sig.add(normalize(mu));
    }
  }
  return sig;
}

Signature read_signature_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open fragment file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_signature(ss.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::vector<SignatureViolation> validate_standard_fragment(const Signature& sig) {
  std::vector<SignatureViolation> out;
  const std::pair<const char*, TruthTable> required[] = {
      {"conjunction", from_expr("p1 & p2")},
      {"disjunction", from_expr("p1 | p2")},
      {"top", TruthTable::constant(0, true)},
      {"bottom", TruthTable::constant(0, false)},
  };
  for (const auto& [what, core] : required)
    if (!sig.find_degree0(core)) out.push_back({"", std::string("missing degree-0 ") + what});
  for (const auto& [name, mu] : sig) {
    if (!is_normalized(mu)) out.push_back({name, "not normalized (innermost block is vacuous over a constant core)"});
    const ConnectiveClass c = classify_connective(mu);
    if (c.is_standard) continue;
    if (c.degree > 2) {
      out.push_back({name, "degree " + std::to_string(c.degree) + " exceeds 2"});
    } else if (c.core_class.is_constant) {
      out.push_back({name, "degree-2 connective with a constant core is not regular"});
    } else {
      out.push_back({name, "degree-1 ancestor is not weakly special"});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Standard translation

std::string FreshVars::take() {
  for (;;) {
    std::string v = "x" + std::to_string(next_++);
    if (reserved_.insert(v).second) return v;
  }
}

std::vector<std::string> allocate_bound_vars(const GuardedConnective& mu, FreshVars& fresh) {
  std::vector<std::string> vars;
  for (const auto& b : mu.blocks())
    for (std::size_t i = 0; i < b.guards.size(); ++i) vars.push_back(fresh.take());
  return vars;
}

static FoFormula from_bool_expr(const BoolExpr& e, const std::vector<FoFormula>& args) {
  using BK = BoolExpr::Kind;
  std::vector<FoFormula> kids;
  for (const auto& k : e.kids) kids.push_back(from_bool_expr(k, args));
  switch (e.kind) {
    case BK::constant: return e.value ? FoFormula::top() : FoFormula::bot();
    case BK::var: return args.at(e.var - 1);
    case BK::neg: return FoFormula::negation(std::move(kids[0]));
    case BK::conj: return FoFormula::conjunction(std::move(kids));
    case BK::disj: return FoFormula::disjunction(std::move(kids));
    case BK::imp: return FoFormula::implies(std::move(kids[0]), std::move(kids[1]));
    case BK::iff: return FoFormula::iff(std::move(kids[0]), std::move(kids[1]));
  }
  return FoFormula::top();
}

FoFormula core_formula(const TruthTable& core, const std::vector<FoFormula>& args) {
  if (args.size() != core.arity()) throw PreconditionError("core arity mismatch");
  return from_bool_expr(canonical_expr(core), args);
}

FoFormula build_translation(const GuardedConnective& mu, const std::string& var,
                            const std::vector<std::string>& bound, std::vector<FoFormula> core_args) {
  FoFormula body = core_formula(mu.core(), core_args);
  // Start variable of every block: the variable its first guard leaves from.
  std::vector<std::size_t> first(mu.degree());
  std::size_t k = 0;
  for (std::size_t i = 0; i < mu.degree(); ++i) {
    first[i] = k;
    k += mu.blocks()[i].guards.size();
  }
  if (k != bound.size()) throw PreconditionError("wrong number of bound variables");
  for (std::size_t i = mu.degree(); i-- > 0;) {
    const auto& block = mu.blocks()[i];
    std::vector<FoFormula> path;
    for (std::size_t j = 0; j < block.guards.size(); ++j) {
      const std::size_t at = first[i] + j;
      const std::string& from = at == 0 ? var : bound[at - 1];
      path.push_back(FoFormula::rel(block.guards[j], from, bound[at]));
    }
    if (block.quantifier == Quantifier::forall) {
      body = FoFormula::implies(FoFormula::conjunction(std::move(path)), std::move(body));
    } else {
      path.push_back(std::move(body));
      body = FoFormula::conjunction(std::move(path));
    }
    for (std::size_t j = block.guards.size(); j-- > 0;) {
      const std::string& v = bound[first[i] + j];
      body = block.quantifier == Quantifier::forall ? FoFormula::forall(v, std::move(body))
                                                    : FoFormula::exists(v, std::move(body));
    }
  }
  return body;
}

FoFormula std_translation(const GuardedConnective& mu, const std::vector<FoFormula>& args, const std::string& var) {
  if (args.size() != mu.arity())
    throw PreconditionError("connective '" + mu.name() + "' takes " + std::to_string(mu.arity()) + " arguments, got " +
                            std::to_string(args.size()));
  std::set<std::string> reserved{var};
  for (const auto& a : args) {
    auto vs = all_vars(a);
    reserved.insert(vs.begin(), vs.end());
  }
  FreshVars fresh(std::move(reserved));
  auto bound = allocate_bound_vars(mu, fresh);
  const std::string& inner = bound.empty() ? var : bound.back();
  std::vector<FoFormula> core_args;
  for (const auto& a : args) core_args.push_back(inner == var ? a : rename_free(a, var, inner));
  return build_translation(mu, var, bound, std::move(core_args));
}

// ---------------------------------------------------------------------------
// Direct semantics

Bits apply_connective(const Model& m, const GuardedConnective& mu, const std::vector<Bits>& args) {
  if (args.size() != mu.arity()) throw PreconditionError("argument count does not match the arity");
  const unsigned n = mu.arity();
  Bits cur(m.size());
  for (std::size_t w = 0; w < m.size(); ++w) {
    std::size_t tuple = 0;
    for (unsigned i = 0; i < n; ++i)
      if (args[i].test(w)) tuple |= std::size_t{1} << (n - 1 - i);
    cur[w] = mu.core()[tuple];
  }
  for (auto it = mu.blocks().rbegin(); it != mu.blocks().rend(); ++it) {
    if (it->quantifier == Quantifier::exists) {
      cur = guard_preimage(m, it->guards, cur);
    } else {
      cur.flip();
      cur = guard_preimage(m, it->guards, cur);
      cur.flip();
    }
  }
  return cur;
}

}  // namespace asimkit
