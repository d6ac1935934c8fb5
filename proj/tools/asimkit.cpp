// asimkit command-line tool.
//
// Exit codes: 0 success, 1 semantic negative (violations found, points not
// related, nothing distinguishes), 2 input error, 3 unsupported fragment.
// With --json, machine-readable JSON lines go to stdout and the readable
// summary goes to stderr.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "asimkit/asim.hpp"
#include "asimkit/boolfn.hpp"
#include "asimkit/connective.hpp"
#include "asimkit/error.hpp"
#include "asimkit/experiment.hpp"
#include "asimkit/fo.hpp"
#include "asimkit/fragment.hpp"
#include "asimkit/model.hpp"
#include "json.hpp"

using namespace asimkit;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInput = 2;
constexpr int kUnsupported = 3;

struct Out {
  bool json = false;
  void machine(const nlohmann::json& j) const {
    if (json) std::cout << j.dump() << '\n';
  }
  std::ostream& human() const { return json ? std::cerr : std::cout; }
};

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::size_t element(const Model& m, const std::string& name, const std::string& what) {
  auto i = m.index_of(name);
  if (!i) throw InputError(what + ": unknown element '" + name + "'");
  return *i;
}

// Refuses non-standard fragments unless explicitly allowed.
void require_standard(const Signature& sig, bool allow, const Out& out) {
  const auto problems = validate_standard_fragment(sig);
  if (problems.empty()) return;
  if (allow) {
    out.human() << "warning: fragment is not standard; results are experimental\n";
    return;
  }
  std::string msg = "fragment is not standard:";
  for (const auto& p : problems) msg += " [" + (p.connective.empty() ? std::string("signature") : p.connective) + ": " + p.reason + "]";
  throw UnsupportedFragment(msg);
}

std::vector<std::string> split_preds(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

json class_json(const BoolClass& c) {
  return {{"class", class_label(c)},
          {"constant", c.is_constant},
          {"monotone", c.is_monotone},
          {"antimonotone", c.is_antimonotone},
          {"rest", c.is_rest},
          {"tft", c.is_tft},
          {"ftf", c.is_ftf},
          {"forall_special", c.forall_special},
          {"exists_special", c.exists_special},
          {"weakly_forall_special", c.weakly_forall_special},
          {"weakly_exists_special", c.weakly_exists_special}};
}

// ---------------------------------------------------------------------------

struct ClassifyBoolArgs {
  std::string expr;
  int arity = -1;
};

int run_classify_bool(const ClassifyBoolArgs& a, const Out& out) {
  const BoolExpr e = parse_bool_expr(a.expr);
  const unsigned n = a.arity < 0 ? e.max_var() : static_cast<unsigned>(a.arity);
  if (n < e.max_var()) throw InputError("--arity is below the highest variable index");
  const TruthTable f = table_of(e, n);
  const BoolClass c = classify(f);
  json j = class_json(c);
  j["expr"] = a.expr;
  j["arity"] = n;
  j["table"] = f.to_string();
  json reps = json::object();
  reps["canonical"] = to_string(canonical_expr(f));
  if (!c.is_constant) {
    if (c.is_monotone) reps["lattice"] = to_string(dnf_expr(monotone_lattice_expr(f)));
    if (c.is_antimonotone) reps["negated_lattice"] = "~(" + to_string(dnf_expr(monotone_lattice_expr(f))) + ")";
    if (c.is_monotone || c.is_antimonotone) reps["diagonal"] = unary_name(diagonal(f));
    if (c.is_tft) reps["tft_substitution"] = to_string(tft_substitution(f));
    if (c.is_ftf) reps["ftf_substitution"] = to_string(ftf_substitution(f));
    if (c.is_rest) {
      const auto [pos, neg] = rest_projections(f);
      reps["rest_projections"] = {to_string(pos), to_string(neg)};
    }
    if (!c.is_ftf) reps["non_ftf_dnf"] = to_string(dnf_expr(non_ftf_dnf(f)));
    if (!c.is_tft) reps["non_tft_cnf"] = to_string(cnf_expr(non_tft_cnf(f)));
  }
  j["representations"] = reps;
  out.machine(j);

  auto& h = out.human();
  h << "function: " << a.expr << " (arity " << n << ", table " << f.to_string() << ")\n";
  h << "class: " << class_label(c);
  if (c.is_tft) h << ", TFT";
  if (c.is_ftf) h << ", FTF";
  if (c.forall_special) h << ", forall-special";
  if (c.exists_special) h << ", exists-special";
  if (c.is_rest && !c.forall_special && !c.exists_special) h << ", neither special";
  h << '\n';
  for (const auto& [k, v] : reps.items()) h << "  " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct ClassifyConnectiveArgs {
  std::string connective;
  std::string fragment;
};

json connective_json(const GuardedConnective& mu) {
  const ConnectiveClass cc = classify_connective(mu);
  json j;
  j["name"] = mu.name();
  j["connective"] = to_string(mu);
  j["arity"] = mu.arity();
  j["degree"] = cc.degree;
  j["prefix"] = cc.nu_prefix;
  j["normalized"] = is_normalized(mu);
  j["normal_form"] = to_string(normalize(mu));
  j["core"] = class_json(cc.core_class);
  j["flat"] = cc.is_flat;
  j["modality"] = cc.is_modality;
  j["regular"] = cc.is_regular;
  j["special"] = cc.is_special;
  j["weakly_special"] = cc.is_weakly_special;
  j["standard"] = cc.is_standard;
  j["core_candidate"] = kind_name(core_candidate_kind(cc.core_class));
  return j;
}

void print_connective(const json& j, std::ostream& h) {
  h << j["name"].get<std::string>() << " := " << j["connective"].get<std::string>() << '\n';
  h << "  degree " << j["degree"] << ", prefix '" << j["prefix"].get<std::string>() << "', core "
    << j["core"]["class"].get<std::string>() << '\n';
  h << "  flat " << yes_no(j["flat"]) << ", modality " << yes_no(j["modality"]) << ", regular "
    << yes_no(j["regular"]) << ", special " << yes_no(j["special"]) << ", weakly special "
    << yes_no(j["weakly_special"]) << ", standard " << yes_no(j["standard"]) << '\n';
  if (!j["normalized"].get<bool>()) h << "  normal form: " << j["normal_form"].get<std::string>() << '\n';
}

int run_classify_connective(const ClassifyConnectiveArgs& a, const Out& out) {
  if (a.connective.empty() == a.fragment.empty()) throw InputError("give exactly one of --connective and --fragment");
  if (!a.connective.empty()) {
    const json j = connective_json(parse_connective(a.connective));
    out.machine(j);
    print_connective(j, out.human());
    return kOk;
  }
  const Signature sig = read_signature_file(a.fragment);
  for (const auto& [name, mu] : sig) {
    const json j = connective_json(mu);
    out.machine(j);
    print_connective(j, out.human());
  }
  const auto problems = validate_standard_fragment(sig);
  json verdict;
  verdict["standard_fragment"] = problems.empty();
  verdict["problems"] = json::array();
  for (const auto& p : problems) verdict["problems"].push_back({{"connective", p.connective}, {"reason", p.reason}});
  out.machine(verdict);
  out.human() << "fragment: " << (problems.empty() ? "standard" : "not standard") << '\n';
  for (const auto& p : problems) out.human() << "  " << p.connective << ": " << p.reason << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct TranslateArgs {
  std::string fragment;
  std::string formula;
  std::string connective;
  std::string var = "x1";
};

int run_translate(const TranslateArgs& a, const Out& out) {
  FoFormula phi;
  if (!a.connective.empty()) {
    const GuardedConnective mu = parse_connective(a.connective);
    std::vector<FoFormula> args;
    for (unsigned i = 1; i <= mu.arity(); ++i) args.push_back(FoFormula::pred("P" + std::to_string(i), a.var));
    phi = std_translation(mu, args, a.var);
  } else {
    if (a.fragment.empty() || a.formula.empty()) throw InputError("translate needs --fragment with --formula, or --connective");
    const Signature sig = read_signature_file(a.fragment);
    phi = std_translate(parse_fragment(a.formula, sig), a.var, sig);
  }
  const std::string text = to_string(phi);
  out.machine({{"translation", text}, {"var", a.var}});
  out.human() << text << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string model;
  std::string world;
  std::string formula;
  std::string fo_formula;
  std::string fragment;
};

int run_eval(const EvalArgs& a, const Out& out) {
  if (a.formula.empty() == a.fo_formula.empty()) throw InputError("give exactly one of --formula and --fo-formula");
  const Model m = read_model_file(a.model);
  const std::size_t w = element(m, a.world, "--world");
  bool value = false;
  if (!a.formula.empty()) {
    if (a.fragment.empty()) throw InputError("--formula needs --fragment");
    const Signature sig = read_signature_file(a.fragment);
    value = eval_fragment(m, w, parse_fragment(a.formula, sig), sig);
  } else {
    const FoFormula phi = parse_fo(a.fo_formula);
    const auto fv = free_vars(phi);
    if (fv.size() > 1) throw InputError("--fo-formula must have at most one free variable");
    Assignment alpha;
    if (!fv.empty()) alpha[*fv.begin()] = w;
    value = eval_fo(m, alpha, phi);
  }
  out.machine({{"world", a.world}, {"value", value}});
  out.human() << (value ? "true" : "false") << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct PairArgs {
  std::string fragment;
  std::string m1, m2;
  std::string relation;
  std::string preds;
  std::string point1, point2;
  bool allow_nonstandard = false;
};

struct Loaded {
  Signature sig;
  Model m1, m2;
  std::vector<std::string> preds;
};

Loaded load_pair(const PairArgs& a, const Out& out) {
  Loaded l{read_signature_file(a.fragment), read_model_file(a.m1), read_model_file(a.m2), {}};
  require_standard(l.sig, a.allow_nonstandard, out);
  l.preds = a.preds.empty() ? joint_predicates(l.m1, l.m2) : split_preds(a.preds);
  return l;
}

int run_check(const PairArgs& a, const Out& out) {
  const Loaded l = load_pair(a, out);
  if (a.relation.empty()) throw InputError("check needs --relation");
  const CrossRelation A = read_relation_file(a.relation, l.m1, l.m2);
  AsimOptions opts;
  opts.allow_nonstandard = a.allow_nonstandard;
  const auto violations = is_asimulation(l.sig, l.preds, l.m1, l.m2, A, opts);
  for (const auto& v : violations) {
    if (out.json) std::cout << v.to_json() << '\n';
    out.human() << "violation: " << v.condition;
    if (!v.connective.empty()) out.human() << " for " << v.connective;
    if (!v.first.empty()) out.human() << " at (" << v.first << ", " << v.second << ") " << (v.direction == 0 ? "fwd" : "bwd");
    if (!v.path.empty()) {
      out.human() << " via";
      for (const auto& p : v.path) out.human() << ' ' << p;
    }
    if (!v.detail.empty()) out.human() << ": " << v.detail;
    out.human() << '\n';
  }
  if (violations.empty()) {
    out.machine({{"asimulation", true}});
    out.human() << "ok: the relation is an asimulation\n";
    return kOk;
  }
  return kNegative;
}

int run_largest(const PairArgs& a, const Out& out) {
  const Loaded l = load_pair(a, out);
  AsimOptions opts;
  opts.allow_nonstandard = a.allow_nonstandard;
  const LargestResult r = largest_asimulation(l.sig, l.preds, l.m1, l.m2, opts);
  json j;
  j["relation"] = json::parse(relation_to_json(r.relation, l.m1, l.m2));
  j["none"] = r.none;
  j["rounds"] = r.rounds;
  j["symmetric"] = r.relation.is_symmetric();
  if (r.none) out.human() << "no asimulation exists between these models for this fragment\n";
  else out.human() << relation_to_json(r.relation, l.m1, l.m2, 2) << '\n';
  int code = kOk;
  if (!a.point1.empty() || !a.point2.empty()) {
    if (a.point1.empty() || a.point2.empty()) throw InputError("give both --point1 and --point2");
    const bool related = r.relation.fwd(element(l.m1, a.point1, "--point1"), element(l.m2, a.point2, "--point2"));
    j["verdict"] = related ? "related" : "not related";
    out.human() << "verdict: " << j["verdict"].get<std::string>() << '\n';
    if (!related) code = kNegative;
  }
  out.machine(j);
  return code;
}

struct DistinguishArgs : PairArgs {
  unsigned depth = 3;
};

int run_distinguish(const DistinguishArgs& a, const Out& out) {
  const Signature sig = read_signature_file(a.fragment);
  const Model m1 = read_model_file(a.m1);
  const Model m2 = read_model_file(a.m2);
  if (a.point1.empty() || a.point2.empty()) throw InputError("distinguish needs --point1 and --point2");
  const PointedModel p1{m1, element(m1, a.point1, "--point1")};
  const PointedModel p2{m2, element(m2, a.point2, "--point2")};
  const Distinction d = distinguishing_formula(sig, p1, p2, a.depth, split_preds(a.preds));
  json j;
  j["status"] = status_name(d.status);
  if (d.formula) {
    j["formula"] = to_string(*d.formula);
    out.machine(j);
    out.human() << to_string(*d.formula) << '\n';
    return kOk;
  }
  j["formula"] = nullptr;
  out.machine(j);
  out.human() << "none within depth " << a.depth;
  if (d.status == EnumStatus::budget_exhausted) out.human() << " (enumeration budget exhausted)";
  out.human() << '\n';
  return kNegative;
}

// ---------------------------------------------------------------------------

struct ExperimentArgs {
  std::string fragment;
  std::string preds = "P1,P2";
  ExperimentConfig cfg;
};

int run_experiment_cmd(ExperimentArgs a, const Out& out) {
  const Signature sig = read_signature_file(a.fragment);
  require_standard(sig, false, out);
  a.cfg.preds = split_preds(a.preds);
  const auto reports = run_experiment(sig, a.cfg);
  // The trial lines always go to stdout: they are the report.
  for (const auto& r : reports) std::cout << r.to_json() << '\n';
  const std::string summary = summary_json(reports);
  std::cout << summary << '\n';
  std::size_t failed = 0;
  for (const auto& r : reports) failed += !r.pass();
  std::cerr << reports.size() - failed << "/" << reports.size() << " trials passed\n";
  return failed == 0 ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"asimkit: asimulations for guarded fragments on finite models"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json_out = false;
  app.add_flag("--json", json_out, "Machine-readable JSON lines on stdout")->group("Common");
  std::function<int(const Out&)> action;

  ClassifyBoolArgs cb;
  auto* s_cb = app.add_subcommand("classify-bool", "Classify a Boolean function and print its representations");
  s_cb->add_option("--expr", cb.expr, "Expression over p1, p2, ..., T, F")->required();
  s_cb->add_option("--arity", cb.arity, "Arity (default: highest variable index)");
  s_cb->callback([&] { action = [&](const Out& o) { return run_classify_bool(cb, o); }; });

  ClassifyConnectiveArgs cc;
  auto* s_cc = app.add_subcommand("classify-connective", "Classify a guarded connective or a whole fragment");
  s_cc->add_option("--connective", cc.connective, "e.g. \"forall[R1] exists[R3]{p1}\"");
  s_cc->add_option("--fragment", cc.fragment, "Fragment signature file");
  s_cc->callback([&] { action = [&](const Out& o) { return run_classify_connective(cc, o); }; });

  TranslateArgs tr;
  auto* s_tr = app.add_subcommand("translate", "Standard translation into the correspondence language");
  s_tr->add_option("--fragment", tr.fragment, "Fragment signature file");
  s_tr->add_option("--formula", tr.formula, "Fragment formula");
  s_tr->add_option("--connective", tr.connective, "Translate a connective applied to P1, P2, ...");
  s_tr->add_option("--var", tr.var, "Free variable");
  s_tr->callback([&] { action = [&](const Out& o) { return run_translate(tr, o); }; });

  EvalArgs ev;
  auto* s_ev = app.add_subcommand("eval", "Evaluate a formula at a world");
  s_ev->add_option("--model", ev.model, "Model file")->required();
  s_ev->add_option("--world", ev.world, "Element name")->required();
  s_ev->add_option("--formula", ev.formula, "Fragment formula (needs --fragment)");
  s_ev->add_option("--fo-formula", ev.fo_formula, "First-order formula with at most one free variable");
  s_ev->add_option("--fragment", ev.fragment, "Fragment signature file");
  s_ev->callback([&] { action = [&](const Out& o) { return run_eval(ev, o); }; });

  auto pair_options = [](CLI::App* s, PairArgs& p) {
    s->add_option("--fragment", p.fragment, "Fragment signature file")->required();
    s->add_option("--m1", p.m1, "First model file")->required();
    s->add_option("--m2", p.m2, "Second model file")->required();
    s->add_option("--preds", p.preds, "Comma-separated predicates (default: those of both models)");
    s->add_flag("--allow-nonstandard", p.allow_nonstandard, "Experimental: accept non-standard connectives");
  };

  PairArgs ck;
  auto* s_ck = app.add_subcommand("check", "Check whether a relation is an asimulation");
  pair_options(s_ck, ck);
  s_ck->add_option("--relation", ck.relation, "Relation file")->required();
  s_ck->callback([&] { action = [&](const Out& o) { return run_check(ck, o); }; });

  PairArgs lg;
  auto* s_lg = app.add_subcommand("largest", "Compute the largest asimulation");
  pair_options(s_lg, lg);
  s_lg->add_option("--point1", lg.point1, "Element of the first model");
  s_lg->add_option("--point2", lg.point2, "Element of the second model");
  s_lg->callback([&] { action = [&](const Out& o) { return run_largest(lg, o); }; });

  DistinguishArgs ds;
  auto* s_ds = app.add_subcommand("distinguish", "Search a formula true at point1 and false at point2");
  s_ds->add_option("--fragment", ds.fragment, "Fragment signature file")->required();
  s_ds->add_option("--m1", ds.m1, "First model file")->required();
  s_ds->add_option("--m2", ds.m2, "Second model file")->required();
  s_ds->add_option("--point1", ds.point1, "Element of the first model")->required();
  s_ds->add_option("--point2", ds.point2, "Element of the second model")->required();
  s_ds->add_option("--depth", ds.depth, "Maximal formula depth");
  s_ds->add_option("--preds", ds.preds, "Comma-separated predicates (default: those of both models)");
  s_ds->callback([&] { action = [&](const Out& o) { return run_distinguish(ds, o); }; });

  ExperimentArgs ex;
  auto* s_ex = app.add_subcommand("experiment", "Seeded trials over random model pairs");
  s_ex->add_option("--fragment", ex.fragment, "Fragment signature file")->required();
  s_ex->add_option("--seed", ex.cfg.seed, "Base seed; trial i uses seed + i");
  s_ex->add_option("--trials", ex.cfg.trials, "Number of trials");
  s_ex->add_option("--min-size", ex.cfg.min_size, "Smallest model size");
  s_ex->add_option("--max-size", ex.cfg.max_size, "Largest model size");
  s_ex->add_option("--edge-prob", ex.cfg.edge_prob, "Edge probability");
  s_ex->add_option("--pred-prob", ex.cfg.pred_prob, "Predicate membership probability");
  s_ex->add_option("--preds", ex.preds, "Comma-separated predicates");
  s_ex->add_option("--depth", ex.cfg.depth, "Formula depth for the invariance check");
  s_ex->add_option("--sandwich-depth", ex.cfg.max_sandwich_depth, "Deepest level for the preorder comparison");
  s_ex->add_option("--fo-checks", ex.cfg.fo_checks, "Representatives also checked through their translation");
  s_ex->add_flag("--preorder", ex.cfg.preorder, "Reflexive-transitive models with upward-closed predicates");
  s_ex->callback([&] { action = [&](const Out& o) { return run_experiment_cmd(ex, o); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  const Out out{json_out};
  try {
    return action(out);
  } catch (const UnsupportedFragment& e) {
    std::cerr << "unsupported fragment: " << e.what() << '\n';
    return kUnsupported;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kInput;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const PreconditionError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  }
}
