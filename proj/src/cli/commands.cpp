#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "cubic/census.hpp"
#include "cubic/cli.hpp"
#include "cubic/descent.hpp"
#include "cubic/flex.hpp"

namespace cubic::cli {

namespace {

constexpr int kExitOk = 0, kExitUser = 1, kExitBudget = 2, kExitInternal = 3;

struct Context {
  std::string command;
  Params params;
  RunManifest manifest;
  std::ostream* out = &std::cout;
  bool json = false;
};

using Handler = std::function<int(Context&)>;

struct Command {
  std::string path;  // "census curves"
  std::string help;
  std::vector<ParamSpec> specs;
  Handler run;
  std::vector<std::string> input_files{};  // parameters naming files to digest
};

const std::vector<ParamSpec>& common_specs() {
  static const std::vector<ParamSpec> s{
      {"workers", "0", "worker threads (0 = hardware concurrency)"},
      {"seed", "1", "seed for every random choice"},
      {"json", "false", "JSON lines on stdout"},
      {"config", "", "key=value config file", false},
      {"timestamp", "", "manifest timestamp (default: now, UTC)", false},
      {"out", "", "output file (written as <out>.partial, renamed when complete)", false},
      {"resume", "false", "resume <out> from its checkpoint", false},
      {"max-units", "0", "stop after this many new work units, leaving a resumable file", false}};
  return s;
}

std::string form_text(const IntCoeffs& c) {
  std::string s;
  for (int i = 0; i < 10; ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s;
}

Json null_or(const std::optional<bool>& b) { return b ? Json(*b) : Json(nullptr); }

Json label(char c) { return c ? Json(std::string(1, c)) : Json(nullptr); }

std::string pair_text(const Rational& I, const Rational& J) { return to_string(I) + "," + to_string(J); }

void print_record(Context& ctx, const Json& rec) {
  if (ctx.json) {
    *ctx.out << rec.dump() << '\n';
    return;
  }
  for (const auto& [k, v] : rec.items()) *ctx.out << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
}

void print_note(Context& ctx, const std::string& text) {
  if (ctx.json) {
    Json j;
    j["note"] = text;
    *ctx.out << j.dump() << '\n';
  } else {
    *ctx.out << text << '\n';
  }
}

// Records go to the output file when --out is set, otherwise to stdout after the manifest.
class Sink {
 public:
  Sink(Context& ctx, Format format) : ctx_(ctx) {
    const std::string& path = ctx.params.str("out");
    max_units_ = ctx.params.integer("max-units");
    if (!path.empty()) file_.emplace(path, ctx.manifest, format, ctx.params.boolean("resume"));
    else if (ctx.params.boolean("resume")) throw UsageError("--resume needs --out");
  }
  long resumed() const { return file_ ? file_->resumed_records() : 0; }
  bool fresh() const { return resumed() == 0; }
  bool to_file() const { return file_.has_value(); }
  void write(const std::string& line) {
    if (file_) file_->write(line);
    else *ctx_.out << line << '\n';
  }
  // Returns false once the unit budget of this run is spent.
  bool unit_done() {
    if (file_) file_->checkpoint();
    ++units_;
    return max_units_ <= 0 || units_ < max_units_;
  }
  int finish(bool complete) {
    if (!file_) return kExitOk;
    if (!complete) {
      print_note(ctx_, "stopped after " + std::to_string(units_) + " units; rerun with --resume to continue " +
                           file_->path());
      return kExitBudget;
    }
    file_->commit();
    print_note(ctx_, "wrote " + file_->path());
    return kExitOk;
  }

 private:
  Context& ctx_;
  std::optional<OutputFile> file_;
  long max_units_ = 0;
  long units_ = 0;
};

FactorBudget factor_budget(const Params& p) {
  FactorBudget b;
  b.trial_bound = static_cast<unsigned long>(p.integer("trial-bound"));
  b.rho_iterations = static_cast<unsigned long>(p.integer("rho-iterations"));
  return b;
}

const std::vector<ParamSpec> kFactorSpecs{{"trial-bound", "1000000", "trial division bound"},
                                          {"rho-iterations", "2000000", "Pollard rho iterations"}};

std::vector<ParamSpec> with(std::vector<ParamSpec> a, const std::vector<ParamSpec>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<TernaryCubicForm> input_forms(const Params& p) {
  std::vector<TernaryCubicForm> out;
  if (!p.str("form").empty()) out.push_back(TernaryCubicForm::parse(p.str("form")));
  if (!p.str("file").empty()) {
    std::ifstream in(p.str("file"));
    if (!in) throw UsageError("cannot read " + p.str("file"));
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (line.empty() || line[0] == '#') continue;
      try {
        out.push_back(TernaryCubicForm::parse(line));
      } catch (const UsageError& e) {
        throw UsageError(p.str("file") + ":" + std::to_string(n) + ": " + e.what());
      }
    }
  }
  if (out.empty()) throw UsageError("give --form or --file");
  return out;
}

TernaryCubicForm one_form(const Params& p, const std::string& name) {
  if (p.str(name).empty()) throw UsageError("--" + name + " is required");
  return TernaryCubicForm::parse(p.str(name));
}

Json verdict_json(const SolubilityVerdict& v) {
  Json j;
  j["prime"] = v.prime == 0 ? Json("real") : Json(v.prime);
  j["status"] = to_string(v.status);
  j["k"] = v.precision;
  if (v.witness) j["witness"] = to_string((*v.witness)[0]) + "," + to_string((*v.witness)[1]) + "," +
                                to_string((*v.witness)[2]);
  j["certificate"] = v.certificate;
  return j;
}

Json equivalence_json(const EquivalenceResult& r) {
  Json j;
  j["status"] = to_string(r.status);
  if (r.witness) j["witness"] = serialize_matrix(*r.witness);
  if (r.certificate) {
    j["certificate"] = {{"kind", to_string(r.certificate->kind)},
                        {"prime", r.certificate->prime},
                        {"value_f", r.certificate->value_f},
                        {"value_g", r.certificate->value_g}};
  }
  j["nodes"] = r.nodes;
  return j;
}

// ---- commands

int cmd_invariants(Context& ctx) {
  FactorBudget budget = factor_budget(ctx.params);
  for (const auto& f : input_forms(ctx.params)) {
    InvariantPair p = invariants(f);
    EligibilityClass e = eligible(p.I, p.J);
    Json r;
    r["form"] = f.serialize();
    r["I"] = to_string(p.I);
    r["J"] = to_string(p.J);
    r["discriminant"] = to_string(p.disc);
    r["height"] = to_string(p.height);
    r["eligible"] = e.eligible;
    r["residue_64"] = label(e.residue_64);
    r["residue_27"] = label(e.residue_27);
    if (p.disc == 0) {
      r["strongly_irreducible"] = nullptr;
      r["totally_irreducible"] = nullptr;
    } else {
      bool strong = is_strongly_irreducible(f, budget);
      r["strongly_irreducible"] = strong;
      r["totally_irreducible"] = strong && !jacobian_has_rational_3_torsion(p.I, p.J, budget);
    }
    print_record(ctx, r);
  }
  return kExitOk;
}

int cmd_covariants(Context& ctx) {
  TernaryCubicForm f = one_form(ctx.params, "form");
  CoveringData c = covering_map(f);
  bool ok = reduce_mod_form(covering_syzygy(c), f.to_poly()).is_zero();
  Json r;
  r["form"] = f.serialize();
  r["hessian"] = c.hessian.to_string();
  r["bordered_hessian_over_36"] = c.bordered.to_string();
  r["jacobian_covariant_over_72"] = c.jac_covariant.to_string();
  r["I"] = to_string(c.target.I);
  r["J"] = to_string(c.target.J);
  r["covering_identity"] = ok;
  print_record(ctx, r);
  return ok ? kExitOk : kExitInternal;
}

int cmd_flexes(Context& ctx) {
  TernaryCubicForm f = one_form(ctx.params, "form");
  FactorBudget budget = factor_budget(ctx.params);
  FlexReport rep = rational_flexes(f, budget);
  InvariantPair p = invariants(f);
  Json r;
  r["form"] = f.serialize();
  Json pts = Json::array();
  for (const auto& q : rep.rational_flexes) pts.push_back(q.to_string());
  r["rational_flexes"] = pts;
  r["eliminated_variable"] = std::string(1, "xyz"[rep.certificate.eliminated_var]);
  r["eliminant_degree"] = rep.certificate.degree;
  r["rational_multiplicity"] = rep.certificate.rational_multiplicity;
  r["residual_degree"] = rep.certificate.residual_degree;
  r["certified"] = rep.certified;
  r["strongly_irreducible"] = rep.rational_flexes.empty();
  r["jacobian_rational_3_torsion"] = jacobian_has_rational_3_torsion(p.I, p.J, budget);
  Json modp = Json::object();
  for (const auto& s : ctx.params.list("primes")) {
    long q = parse_integer(s).get_si();
    if (q < 3 || !is_prime(static_cast<unsigned long>(q))) throw UsageError("--primes: " + s + " is not an odd prime");
    if (!f.is_integral() || !discriminant_nonzero_mod(f, q)) continue;
    modp[std::to_string(q)] = flexes_mod_p(f, q).count;
  }
  r["flexes_mod_p"] = modp;
  print_record(ctx, r);
  return rep.certified ? kExitOk : kExitBudget;
}

int cmd_eligible(Context& ctx) {
  Rational I = ctx.params.rational("I"), J = ctx.params.rational("J");
  EligibilityClass e = eligible(I, J);
  Json r;
  r["I"] = to_string(I);
  r["J"] = to_string(J);
  r["residue_64"] = label(e.residue_64);
  r["residue_27"] = label(e.residue_27);
  r["eligible"] = e.eligible;
  if (!e.reason.empty()) r["reason"] = e.reason;
  Rational c4 = 16 * I, c6 = 32 * J;
  if (c4.get_den() == 1 && c6.get_den() == 1) {
    r["c4"] = to_string(c4);
    r["c6"] = to_string(c6);
    r["kraus"] = eligible_kraus(c4.get_num(), c6.get_num());
  }
  print_record(ctx, r);
  return kExitOk;
}

int cmd_census_pairs(Context& ctx) {
  Sink sink(ctx, Format::csv);
  if (sink.fresh()) {
    sink.write("X,sign,count,predicted,ratio");
    if (!sink.unit_done()) return sink.finish(false);
  }
  long unit = 1;
  for (const auto& xs : ctx.params.list("X")) {
    Integer X = parse_integer(xs);
    for (DiscSign s : {DiscSign::positive, DiscSign::negative}) {
      if (unit++ < sink.resumed()) continue;
      EligibleCount c = count_eligible_pairs(X, s);
      sink.write(to_string(X) + "," + to_string(s) + "," + to_string(c.count) + "," + fmt(c.predicted) + "," +
                 fmt(c.ratio));
      if (sink.to_file()) print_note(ctx, "X=" + to_string(X) + " sign=" + to_string(s) + " count=" + to_string(c.count) +
                          " predicted=" + fmt(c.predicted) + " ratio=" + fmt(c.ratio));
      if (!sink.unit_done()) return sink.finish(false);
    }
  }
  return sink.finish(true);
}

int cmd_census_curves(Context& ctx) {
  Family family = parse_family(ctx.params.str("family"));
  FactorBudget budget = factor_budget(ctx.params);
  unsigned workers = static_cast<unsigned>(ctx.params.integer("workers"));
  Sink sink(ctx, Format::csv);
  if (sink.fresh()) {
    sink.write("X,family,count,undetermined,all_count");
    if (!sink.unit_done()) return sink.finish(false);
  }
  long unit = 1;
  std::vector<std::pair<Integer, long>> seen;
  for (const auto& xs : ctx.params.list("X")) {
    Integer X = parse_integer(xs);
    if (unit++ < sink.resumed()) continue;
    CurveCensus c = count_curves(family, X, budget, workers);
    sink.write(to_string(X) + "," + to_string(family) + "," + std::to_string(c.count) + "," +
               std::to_string(c.undetermined) + "," + std::to_string(c.all_count));
    if (sink.to_file()) print_note(ctx, "X=" + to_string(X) + " family=" + to_string(family) + " count=" + std::to_string(c.count) +
                        " undetermined=" + std::to_string(c.undetermined) + " density=" + fmt(c.density));
    seen.emplace_back(X, c.count);
    if (!sink.unit_done()) return sink.finish(false);
  }
  if (seen.size() >= 2 && seen.front().second > 0 && seen.back().second > 0 && seen.front().first != seen.back().first) {
    long double s = std::log(static_cast<long double>(seen.back().second) / seen.front().second) /
                    std::log(static_cast<long double>(seen.back().first.get_d()) / seen.front().first.get_d());
    print_note(ctx, "log-log slope " + fmt(s) + " (5/6 = " + fmt(5.0L / 6.0L) + ")");
  }
  return sink.finish(true);
}

int cmd_census_forms(Context& ctx) {
  EnumerateOptions opts;
  opts.cap = static_cast<int>(ctx.params.integer("cap"));
  opts.annotate_irreducibility = ctx.params.boolean("annotate");
  opts.budget = factor_budget(ctx.params);
  int bound = static_cast<int>(ctx.params.integer("bound"));
  Sink sink(ctx, Format::jsonl);
  long skip = sink.resumed(), index = 0, strong = 0, singular = 0;
  bool stopped = false;
  struct Stop {};
  try {
    enumerate_forms(
        bound,
        [&](const FormRecord& r) {
          if (index++ < skip) return;
          Json j;
          j["form"] = form_text(r.coeffs);
          j["I"] = to_string(Rational(r.i16, 16));
          j["J"] = to_string(Rational(r.j32, 32));
          j["singular"] = r.singular;
          j["strongly_irreducible"] = null_or(r.strongly_irreducible);
          j["totally_irreducible"] = null_or(r.totally_irreducible);
          sink.write(j.dump());
          strong += r.strongly_irreducible.value_or(false);
          singular += r.singular;
          if (index % 1024 == 0 && !sink.unit_done()) throw Stop{};
        },
        opts);
  } catch (const Stop&) {
    stopped = true;
  }
  if (stopped) return sink.finish(false);
  sink.unit_done();
  print_note(ctx, "forms=" + std::to_string(index) + " singular=" + std::to_string(singular) +
                      " strongly_irreducible=" + std::to_string(strong));
  return sink.finish(true);
}

int cmd_census_classes(Context& ctx) {
  Rational I = ctx.params.rational("I"), J = ctx.params.rational("J");
  SearchBudget sb{ctx.params.integer("nodes")};
  ClassCount cc = class_count_lower_bound(I, J, static_cast<int>(ctx.params.integer("bound")), sb,
                                          static_cast<unsigned>(ctx.params.integer("workers")));
  Sink sink(ctx, Format::jsonl);
  if (!sink.fresh()) throw UsageError("class records are written in one unit; rerun without --resume");
  for (std::size_t k = 0; k < cc.classes.size(); ++k) {
    const auto& c = cc.classes[k];
    Json j;
    j["class"] = k;
    j["invariants"] = pair_text(c.invariants.I, c.invariants.J);
    j["representative"] = form_text(c.representative);
    Json mem = Json::array();
    for (const auto& m : c.members) mem.push_back(form_text(m));
    j["members"] = mem;
    Json st = Json::array();
    for (const auto& s : c.statuses) {
      Json e = equivalence_json(s.result);
      e["other"] = s.other;
      st.push_back(e);
    }
    j["statuses"] = st;
    sink.write(j.dump());
  }
  Json s;
  s["h_low"] = cc.h_low;
  s["forms_found"] = cc.forms_found;
  s["strongly_irreducible"] = cc.strongly_irreducible;
  s["undecided"] = cc.undecided;
  sink.write(s.dump());
  sink.unit_done();
  print_note(ctx, "h_low=" + std::to_string(cc.h_low) + " (lower bound) forms=" + std::to_string(cc.forms_found) +
                      " undecided=" + std::to_string(cc.undecided));
  return sink.finish(true);
}

int cmd_equivalence(Context& ctx) {
  TernaryCubicForm f = one_form(ctx.params, "form"), g = one_form(ctx.params, "other");
  EquivalenceResult r = are_equivalent(f, g, SearchBudget{ctx.params.integer("nodes")});
  if (!verify_equivalence_result(f, g, r)) throw InvariantViolation("equivalence verdict does not verify");
  Json j = equivalence_json(r);
  j["form"] = f.serialize();
  j["other"] = g.serialize();
  print_record(ctx, j);
  return r.status == EquivalenceStatus::unknown ? kExitBudget : kExitOk;
}

int cmd_descent(Context& ctx) {
  CurveModel E = CurveModel::from_weierstrass(ctx.params.big("A"), ctx.params.big("B"));
  SelmerBudget b;
  b.equivalence.nodes = ctx.params.integer("nodes");
  b.factor = factor_budget(ctx.params);
  b.padic.max_k = static_cast<int>(ctx.params.integer("padic-max-k"));
  b.padic.node_budget = ctx.params.integer("padic-nodes");
  b.coeff_cap = static_cast<int>(ctx.params.integer("cap"));
  b.workers = static_cast<unsigned>(ctx.params.integer("workers"));
  SelmerSearch s = selmer_search(E, static_cast<int>(ctx.params.integer("bound")), b);
  Sink sink(ctx, Format::jsonl);
  if (!sink.fresh()) throw UsageError("descent reports are written in one unit; rerun without --resume");
  for (std::size_t k = 0; k < s.classes.size(); ++k) {
    const auto& c = s.classes[k];
    Json j;
    j["class"] = k;
    j["representative"] = c.representative.serialize();
    j["members"] = c.members.size();
    j["trivial"] = c.trivial;
    Json sig = Json::object();
    for (auto [p, n] : c.flex_signature) sig[std::to_string(p)] = n;
    j["flex_counts"] = sig;
    Json local = Json::array();
    local.push_back(verdict_json(c.solubility.real));
    for (const auto& v : c.solubility.primes) local.push_back(verdict_json(v));
    j["local"] = local;
    if (c.negation) j["negative"] = equivalence_json(*c.negation);
    Json st = Json::array();
    for (const auto& p : c.statuses) {
      Json e = equivalence_json(p.result);
      e["other"] = p.other;
      st.push_back(e);
    }
    j["statuses"] = st;
    sink.write(j.dump());
  }
  Json sum;
  sum["curve"] = {{"A", to_string(E.A())}, {"B", to_string(E.B())}, {"I", to_string(E.I)}, {"J", to_string(E.J)}};
  sum["coeff_bound"] = s.coeff_bound;
  sum["forms_scanned"] = s.forms_scanned;
  sum["forms_matching"] = s.forms_matching;
  sum["locally_soluble"] = s.locally_soluble;
  sum["insoluble"] = s.insoluble;
  sum["solubility_undetermined"] = s.solubility_undetermined;
  sum["classes"] = s.classes.size();
  sum["distinct_signatures"] = s.distinct_signatures;
  sum["selmer_lower_bound"] = s.lower_bound;
  sum["phase_notes"] = s.phase_notes;
  sink.write(sum.dump());
  sink.unit_done();
  print_note(ctx, "#S3(E) >= " + std::to_string(s.lower_bound) + " (lower bound; " +
                      std::to_string(s.classes.size()) + " classes of locally soluble forms)");
  int rc = sink.finish(true);
  return rc == kExitOk && s.solubility_undetermined ? kExitBudget : rc;
}

int cmd_rootnumber(Context& ctx) {
  CurveModel E;
  bool ab = ctx.params.given("A") || ctx.params.given("B");
  bool ij = ctx.params.given("I") || ctx.params.given("J");
  if (ab == ij) throw UsageError("give either --A and --B or --I and --J");
  if (ab) E = CurveModel::from_weierstrass(ctx.params.big("A"), ctx.params.big("B"));
  else E = CurveModel{ctx.params.big("I"), ctx.params.big("J")};
  if (E.discriminant() == 0) throw UsageError("curve is singular");
  FactorBudget budget = factor_budget(ctx.params);
  Json r;
  r["I"] = to_string(E.I);
  r["J"] = to_string(E.J);
  int rc = kExitOk;
  if (eligible_kraus(E.c4(), E.c6())) {
    try {
      Integer d = minimal_discriminant(E, budget);
      r["minimal_discriminant"] = to_string(d);
      Json red = Json::object();
      for (const auto& pp : factor(d, budget).factors) {
        long p = pp.prime.get_si();
        try {
          red[std::to_string(p)] = to_string(reduction_type(E, p));
        } catch (const Unsupported& e) {
          red[std::to_string(p)] = std::string("multiplicative (") + e.what() + ")";
        }
      }
      r["reduction"] = red;
      try {
        r["root_number"] = root_number(E, budget);
      } catch (const Unsupported& e) {
        r["root_number"] = std::string("unsupported: ") + e.what();
      }
    } catch (const BudgetExceeded& e) {
      r["root_number"] = std::string("undetermined: ") + e.what();
      rc = kExitBudget;
    }
  } else {
    r["root_number"] = "unsupported: (16I, 32J) is not the (c4, c6) of an integral model";
  }
  FamilyVerdict v = in_twist_family(E, budget);
  r["twist_family"] = null_or(v.member);
  if (!v.reason.empty()) r["twist_family_reason"] = v.reason;
  if (v.member && *v.member) {
    r["twist_family_root_number"] = twist_family_root_number(E, budget);
    r["twist_partner_root_number"] = twist_family_root_number(E.twist_minus_one(), budget);
  }
  if (!v.member) rc = kExitBudget;
  print_record(ctx, r);
  return rc;
}

int cmd_selfcheck(Context& ctx) {
  std::optional<InvariantFormulas> loaded;
  if (!ctx.params.str("formulas").empty()) loaded = InvariantFormulas::load(ctx.params.str("formulas"));
  const InvariantFormulas& fm = loaded ? *loaded : InvariantFormulas::builtin();
  InvariantOptions io;
  io.formulas = &fm;
  io.allow_fast_path = false;
  long samples = ctx.params.integer("samples");
  std::mt19937_64 rng(static_cast<std::uint64_t>(ctx.params.integer("seed")));
  auto coeff = [&](long b) { return std::uniform_int_distribution<long>(-b, b)(rng); };
  auto random_form = [&](long b) {
    for (;;) {
      IntCoeffs c;
      for (auto& x : c) x = coeff(b);
      TernaryCubicForm f = TernaryCubicForm::from_ints(c);
      if (!f.is_zero() && discriminant(f) != 0) return f;
    }
  };
  int failures = 0;
  auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    failures += !ok;
    Json j;
    j["check"] = name;
    j["result"] = ok ? "PASS" : "FAIL";
    j["detail"] = detail;
    if (ctx.json) *ctx.out << j.dump() << '\n';
    else *ctx.out << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
  };
  auto guarded = [&](const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
    try {
      auto [ok, detail] = fn();
      report(name, ok, detail);
    } catch (const std::exception& e) {
      report(name, false, std::string("exception: ") + e.what());
    }
  };
  guarded("hessian identity (symbolic)", [&] {
    MultiPoly r = symbolic_identity_residual(fm);
    return std::pair{r.is_zero(), r.is_zero() ? std::string("residual is zero")
                                              : "residual has " + std::to_string(r.terms().size()) + " terms"};
  });
  guarded("hessian identity (random forms)", [&] {
    long bad = 0;
    for (long k = 0; k < samples; ++k) {
      TernaryCubicForm f = random_form(50);
      if (!hessian_identity_holds(f, invariants(f, io))) ++bad;
    }
    return std::pair{bad == 0, std::to_string(samples - bad) + "/" + std::to_string(samples) + " forms"};
  });
  guarded("calibration", [&] {
    long bad = 0;
    for (long k = 0; k < samples; ++k) {
      long A = coeff(1000), B = coeff(1000);
      if (4 * A * A * A + 27 * B * B == 0) continue;
      if (invariants(weierstrass_form(A, B), io) != InvariantPair(-3 * A, -27 * B)) ++bad;
    }
    return std::pair{bad == 0, "I = -3A, J = -27B on " + std::to_string(samples) + " models, " +
                                   std::to_string(bad) + " failures"};
  });
  guarded("covering identity", [&] {
    long n = 0, bad = 0;
    for (long k = 0; k < std::max(1L, samples / 5); ++k, ++n) bad += !verify_covering_identity(random_form(5));
    for (long A = -2; A <= 2; ++A)
      for (long B = -2; B <= 2; ++B) {
        if (4 * A * A * A + 27 * B * B == 0) continue;
        ++n;
        bad += !verify_covering_identity(weierstrass_form(A, B));
      }
    return std::pair{bad == 0, std::to_string(n - bad) + "/" + std::to_string(n) + " forms"};
  });
  guarded("residue equivalence", [&] {
    ResidueCheck r = residue_equivalence_report();
    return std::pair{r.ok(), std::to_string(r.pairs) + " residue pairs, " + std::to_string(r.mismatches) +
                                 " mismatches, " + std::to_string(r.kraus_set) + " eligible"};
  });
  return failures ? kExitInternal : kExitOk;
}

std::vector<Command> commands() {
  std::vector<ParamSpec> form_in{{"form", "", "comma-separated coefficients a300..a003"},
                                 {"file", "", "file with one form per line"}};
  return {
      {"invariants", "I, J, discriminant, height, eligibility and irreducibility of forms", with(form_in, kFactorSpecs),
       cmd_invariants, {"file"}},
      {"covariants", "Hessian, normalized covariants and the covering identity",
       {{"form", "", "comma-separated coefficients"}}, cmd_covariants},
      {"flexes", "rational flexes with eliminant accounting, and flex counts mod p",
       with({{"form", "", "comma-separated coefficients"}, {"primes", "5,7,11,13", "primes for flex counts"}},
            kFactorSpecs),
       cmd_flexes},
      {"eligible", "congruence labels of an invariant pair",
       {{"I", "", "rational I"}, {"J", "", "rational J"}}, cmd_eligible},
      {"census eligible-pairs", "eligible pair counts against the leading terms",
       {{"X", "1e6", "comma-separated height bounds"}}, cmd_census_pairs},
      {"census curves", "curve counts by height",
       with({{"X", "1e5,1e6", "comma-separated height bounds"},
             {"family", "all", "all, semistable or twist-family"}},
            kFactorSpecs),
       cmd_census_curves},
      {"census forms", "annotated stream of the forms in a coefficient box",
       with({{"bound", "1", "max |coefficient|"}, {"cap", "3", "largest accepted bound"},
             {"annotate", "true", "compute irreducibility flags"}},
            kFactorSpecs),
       cmd_census_forms},
      {"census classes", "class-count lower bound for an invariant pair",
       {{"I", "", "rational I"}, {"J", "", "rational J"}, {"bound", "1", "max |coefficient|"},
        {"nodes", "400", "equivalence search budget per side"}},
       cmd_census_classes},
      {"equivalence", "proper equivalence semi-decision",
       {{"form", "", "first form"}, {"other", "", "second form"}, {"nodes", "400", "search budget per side"}},
       cmd_equivalence},
      {"descent", "locally soluble forms for y^2 = x^3 + Ax + B and a lower bound for #S3",
       with({{"A", "", "integer A"},
             {"B", "", "integer B"},
             {"bound", "1", "max |coefficient|"},
             {"cap", "2", "largest accepted bound"},
             {"nodes", "400", "equivalence search budget per side"},
             {"padic-max-k", "0", "p-adic precision (0 = 2 v_p(N) + 3)"},
             {"padic-nodes", "2000000", "p-adic search node budget"}},
            kFactorSpecs),
       cmd_descent},
      {"rootnumber", "reduction types, root number and twist family membership",
       with({{"A", "", "integer A"}, {"B", "", "integer B"}, {"I", "", "integer I"}, {"J", "", "integer J"}},
            kFactorSpecs),
       cmd_rootnumber},
      {"selfcheck", "exact identity suites",
       {{"formulas", "", "invariant formula table (default: built in)"},
        {"samples", "50", "random forms per check"}},
       cmd_selfcheck, {"formulas"}},
  };
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

namespace {

int replay(const std::string& manifest_path, const std::string& out_override, std::ostream& out, std::ostream& err) {
  RunManifest m = load_manifest(manifest_path);
  std::vector<std::string> args = m.replay_args();
  if (!out_override.empty()) args.push_back("--out=" + out_override);
  return run_cli(args, out, err);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Invariant theory of integral ternary cubic forms and 3-descent", "cubic");
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());
  std::vector<Command> cmds = commands();
  std::vector<std::unique_ptr<Context>> contexts;
  std::vector<std::pair<CLI::App*, std::size_t>> leaves;
  std::map<std::string, CLI::App*> groups;
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    const Command& c = cmds[i];
    CLI::App* parent = &app;
    std::string name = c.path;
    if (auto sp = c.path.find(' '); sp != std::string::npos) {
      std::string g = c.path.substr(0, sp);
      if (!groups.count(g)) {
        groups[g] = app.add_subcommand(g, g + " experiments");
        groups[g]->require_subcommand(1);
      }
      parent = groups[g];
      name = c.path.substr(sp + 1);
    }
    CLI::App* sub = parent->add_subcommand(name, c.help);
    auto ctx = std::make_unique<Context>();
    ctx->command = c.path;
    ctx->out = &out;
    ctx->params.declare(sub, with(c.specs, common_specs()));
    contexts.push_back(std::move(ctx));
    leaves.emplace_back(sub, i);
  }
  std::string manifest_path, replay_out;
  CLI::App* rp = app.add_subcommand("replay", "rerun the command recorded in a manifest");
  rp->add_option("--manifest", manifest_path, "output file or manifest")->required();
  rp->add_option("--out", replay_out, "output file for the rerun");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUser;
  }
  try {
    if (rp->parsed()) return replay(manifest_path, replay_out, out, err);
    for (auto [sub, i] : leaves) {
      if (!sub->parsed()) continue;
      Context& ctx = *contexts[i];
      ctx.params.resolve();
      ctx.json = ctx.params.boolean("json");
      ctx.manifest.command = ctx.command;
      ctx.manifest.parameters = ctx.params.recorded();
      ctx.manifest.version = tool_version();
      for (const auto& f : cmds[i].input_files)
        if (!ctx.params.str(f).empty()) ctx.manifest.input_digests[f] = file_digest(ctx.params.str(f));
      if (!ctx.params.str("config").empty()) ctx.manifest.input_digests["config"] = file_digest(ctx.params.str("config"));
      ctx.manifest.timestamp = ctx.params.str("timestamp").empty() ? utc_timestamp() : ctx.params.str("timestamp");
      out << manifest_line(ctx.manifest, ctx.json ? Format::jsonl : Format::csv) << '\n';
      return cmds[i].run(ctx);
    }
    throw InvariantViolation("no command selected");
  } catch (const BudgetExceeded& e) {
    err << "cubic: budget exhausted: " << e.what() << '\n';
    return kExitBudget;
  } catch (const UsageError& e) {
    err << "cubic: " << e.what() << '\n';
    return kExitUser;
  } catch (const InvariantViolation& e) {
    err << "cubic: internal invariant violated: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "cubic: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace cubic::cli
