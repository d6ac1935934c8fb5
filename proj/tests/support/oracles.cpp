#include "oracles.hpp"

#include <algorithm>
#include <map>

namespace oracle {

namespace {

std::vector<bool> tuple_args(std::size_t t, unsigned n) {
  std::vector<bool> a(n);
  for (unsigned i = 0; i < n; ++i) a[i] = (t >> (n - 1 - i)) & 1U;
  return a;
}

bool leq(std::size_t a, std::size_t b) { return (a & ~b) == 0; }

}  // namespace

bool eval_at(const TruthTable& f, const std::vector<bool>& args) {
  std::size_t t = 0;
  for (bool b : args) t = (t << 1) | (b ? 1U : 0U);
  return f[t];
}

asimkit::BoolClass brute_classify(const TruthTable& f) {
  asimkit::BoolClass c;
  const std::size_t n = f.size();
  bool all_same = true;
  for (std::size_t t = 0; t < n; ++t) all_same = all_same && f[t] == f[0];
  c.is_constant = all_same;
  c.is_monotone = c.is_antimonotone = true;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (!leq(a, b)) continue;
      if (f[a] && !f[b]) c.is_monotone = false;
      if (!f[a] && f[b]) c.is_antimonotone = false;
    }
  c.is_rest = !c.is_monotone && !c.is_antimonotone;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || !leq(a, b)) continue;
      for (std::size_t d = 0; d < n; ++d) {
        if (d == b || !leq(b, d)) continue;
        if (f[a] && !f[b] && f[d]) c.is_tft = true;
        if (!f[a] && f[b] && !f[d]) c.is_ftf = true;
      }
    }
  c.forall_special = c.is_rest && !c.is_tft;
  c.exists_special = c.is_rest && !c.is_ftf;
  c.weakly_forall_special = !c.is_tft;
  c.weakly_exists_special = !c.is_ftf;
  return c;
}

TruthTable compose(const TruthTable& f, const Substitution& s) {
  Bits out(4);
  for (std::size_t t = 0; t < 4; ++t) {
    const bool p1 = t & 2U, p2 = t & 1U;
    std::vector<bool> args;
    for (Slot sl : s) {
      switch (sl) {
        case Slot::p1: args.push_back(p1); break;
        case Slot::p2: args.push_back(p2); break;
        case Slot::p1_or_p2: args.push_back(p1 || p2); break;
        case Slot::p1_and_p2: args.push_back(p1 && p2); break;
        case Slot::top: args.push_back(true); break;
        case Slot::bot: args.push_back(false); break;
      }
    }
    out[t] = eval_at(f, args);
  }
  return TruthTable(2, out);
}

std::optional<Substitution> search_substitution(const TruthTable& f, const TruthTable& target,
                                                const std::vector<Slot>& slots) {
  const unsigned n = f.arity();
  std::vector<std::size_t> digit(n, 0);
  for (;;) {
    Substitution s;
    for (auto d : digit) s.push_back(slots[d]);
    if (compose(f, s) == target) return s;
    unsigned i = n;
    while (i > 0) {
      --i;
      if (++digit[i] < slots.size()) break;
      digit[i] = 0;
      if (i == 0) return std::nullopt;
    }
    if (n == 0) return std::nullopt;
  }
}

TruthTable random_table(unsigned n, asimkit::Rng& rng) {
  Bits out(std::size_t{1} << n);
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = rng.bernoulli(0.5);
  return TruthTable(n, out);
}

TruthTable random_monotone(unsigned n, asimkit::Rng& rng) {
  const std::size_t size = std::size_t{1} << n;
  const unsigned seeds = 1 + static_cast<unsigned>(rng.between(0, n + 1));
  std::vector<std::size_t> gens;
  for (unsigned i = 0; i < seeds; ++i) gens.push_back(rng.between(0, size - 1));
  Bits out(size);
  for (std::size_t t = 0; t < size; ++t)
    for (auto g : gens)
      if (leq(g, t)) out[t] = true;
  return TruthTable(n, out);
}

std::vector<std::vector<bool>> bisimulation(const Model& m1, const Model& m2, const std::vector<std::string>& rels,
                                            const std::vector<std::string>& preds) {
  const std::size_t n1 = m1.size(), n = n1 + m2.size();
  auto model_of = [&](std::size_t u) -> const Model& { return u < n1 ? m1 : m2; };
  auto local = [&](std::size_t u) { return u < n1 ? u : u - n1; };
  auto global = [&](std::size_t u, std::size_t v) { return u < n1 ? v : v + n1; };

  std::vector<int> block(n);
  {
    std::map<std::vector<bool>, int> ids;
    for (std::size_t u = 0; u < n; ++u) {
      std::vector<bool> key;
      for (const auto& p : preds) key.push_back(model_of(u).holds(p, local(u)));
      block[u] = ids.emplace(key, static_cast<int>(ids.size())).first->second;
    }
  }
  for (;;) {
    std::map<std::pair<int, std::vector<std::set<int>>>, int> ids;
    std::vector<int> next(n);
    for (std::size_t u = 0; u < n; ++u) {
      std::vector<std::set<int>> succ_blocks;
      for (const auto& r : rels) {
        std::set<int> bs;
        const Model& m = model_of(u);
        for (std::size_t v = 0; v < m.size(); ++v)
          if (m.related(r, local(u), v)) bs.insert(block[global(u, v)]);
        succ_blocks.push_back(bs);
      }
      next[u] = ids.emplace(std::make_pair(block[u], succ_blocks), static_cast<int>(ids.size())).first->second;
    }
    const auto count = [](const std::vector<int>& b) { return std::set<int>(b.begin(), b.end()).size(); };
    const bool stable = count(next) == count(block);
    block = next;
    if (stable) break;
  }
  std::vector<std::vector<bool>> fwd(n1, std::vector<bool>(m2.size()));
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t b = 0; b < m2.size(); ++b) fwd[a][b] = block[a] == block[n1 + b];
  return fwd;
}

PlainRelation to_plain(const CrossRelation& r) {
  PlainRelation p;
  for (int d = 0; d < 2; ++d)
    for (std::size_t a = 0; a < r.rows(d).size(); ++a)
      for (std::size_t b = 0; b < r.rows(d)[a].size(); ++b)
        if (r.rows(d)[a][b]) p.dir[d].insert({a, b});
  return p;
}

CrossRelation from_plain(const PlainRelation& p, std::size_t n1, std::size_t n2) {
  CrossRelation r(n1, n2);
  for (auto [a, b] : p.dir[0]) r.set_fwd(a, b);
  for (auto [b, a] : p.dir[1]) r.set_bwd(b, a);
  return r;
}

namespace {

bool pair_ok(const Model* ms[2], int d, std::size_t a, std::size_t b, const std::string& rel,
             const std::vector<std::string>& preds, const PlainRelation& A) {
  const Model& src = *ms[d];
  const Model& dst = *ms[1 - d];
  for (const auto& p : preds)
    if (src.holds(p, a) && !dst.holds(p, b)) return false;
  for (std::size_t b2 = 0; b2 < dst.size(); ++b2) {
    if (!dst.related(rel, b, b2)) continue;
    bool found = false;
    for (std::size_t a2 = 0; a2 < src.size() && !found; ++a2)
      found = src.related(rel, a, a2) && A.dir[d].count({a2, b2}) && A.dir[1 - d].count({b2, a2});
    if (!found) return false;
  }
  return true;
}

}  // namespace

bool intuitionistic_clause(const Model& m1, const Model& m2, const std::string& rel,
                           const std::vector<std::string>& preds, const PlainRelation& A) {
  const Model* ms[2] = {&m1, &m2};
  for (int d = 0; d < 2; ++d)
    for (auto [a, b] : A.dir[d])
      if (!pair_ok(ms, d, a, b, rel, preds, A)) return false;
  return true;
}

PlainRelation largest_intuitionistic(const Model& m1, const Model& m2, const std::string& rel,
                                     const std::vector<std::string>& preds) {
  const Model* ms[2] = {&m1, &m2};
  PlainRelation A;
  for (std::size_t a = 0; a < m1.size(); ++a)
    for (std::size_t b = 0; b < m2.size(); ++b) {
      A.dir[0].insert({a, b});
      A.dir[1].insert({b, a});
    }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int d = 0; d < 2; ++d) {
      for (auto it = A.dir[d].begin(); it != A.dir[d].end();) {
        if (!pair_ok(ms, d, it->first, it->second, rel, preds, A)) {
          it = A.dir[d].erase(it);
          changed = true;
        } else {
          ++it;
        }
      }
    }
  }
  return A;
}

asimkit::FragmentFormula random_formula(const asimkit::Signature& sig, const std::vector<std::string>& preds,
                                        unsigned depth, asimkit::Rng& rng) {
  const auto names = sig.names();
  if (depth == 0 || rng.bernoulli(0.2)) {
    // Depth 0: an atom or a nullary connective.
    std::vector<std::string> nullary;
    for (const auto& nm : names)
      if (sig.at(nm).arity() == 0) nullary.push_back(nm);
    const std::size_t k = rng.between(0, preds.size() + nullary.size() - 1);
    if (k < preds.size()) return asimkit::FragmentFormula::atom(preds[k]);
    return asimkit::FragmentFormula::apply(nullary[k - preds.size()], {});
  }
  std::vector<std::string> with_args;
  for (const auto& nm : names)
    if (sig.at(nm).arity() > 0) with_args.push_back(nm);
  const std::string& nm = with_args[rng.between(0, with_args.size() - 1)];
  std::vector<asimkit::FragmentFormula> kids;
  for (unsigned i = 0; i < sig.at(nm).arity(); ++i) kids.push_back(random_formula(sig, preds, depth - 1, rng));
  return asimkit::FragmentFormula::apply(nm, std::move(kids));
}

std::vector<std::pair<int, std::pair<std::size_t, std::size_t>>> all_pairs(std::size_t n1, std::size_t n2) {
  std::vector<std::pair<int, std::pair<std::size_t, std::size_t>>> out;
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t b = 0; b < n2; ++b) out.push_back({0, {a, b}});
  for (std::size_t b = 0; b < n2; ++b)
    for (std::size_t a = 0; a < n1; ++a) out.push_back({1, {b, a}});
  return out;
}

}  // namespace oracle
