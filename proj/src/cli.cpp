#include "ramforge/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace ramforge {

namespace {

namespace fs = std::filesystem;

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); }

std::int64_t parse_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    invalid(std::string(what) + ": not an integer: \"" + s + "\"");
  }
}

std::vector<std::int64_t> parse_int_list(const std::string& s, const char* what) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) out.push_back(parse_int(tok, what));
  if (out.empty()) invalid(std::string(what) + ": empty coefficient list");
  return out;
}

Json read_json(const std::string& file) {
  std::ifstream in(file);
  if (!in) invalid("cannot open \"" + file + "\"");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, file + ": " + e.what());
  }
}

/// Writes via a temporary file and a rename, so readers never see half a file.
void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) invalid("cannot write \"" + tmp.string() + "\"");
    out << text;
    if (!out) invalid("write failed for \"" + tmp.string() + "\"");
  }
  fs::rename(tmp, path);
}

void write_json(const JobConfig& cfg, const std::string& name, const Json& j) { write_file(fs::path(cfg.outdir) / name, j.dump(2) + "\n"); }

OKRingPtr make_ring(const JobConfig& cfg, int prec) { return OKRing::make(RingSpec::standard(cfg.p, cfg.f, cfg.e, prec)); }

/// Endomorphisms to degree D lose log_q D digits, so the ring carries more than N.
OKRingPtr lt_ring(const JobConfig& cfg) {
  const long q = RingSpec::standard(cfg.p, cfg.f, cfg.e, cfg.N).q();
  return make_ring(cfg, working_precision(cfg.N, q, cfg.D));
}

OKElem parse_elem(const OKRingPtr& R, const std::string& s) { return R->from_int(parse_int(s, "alpha")); }

const std::string& one_alpha(const JobConfig& cfg) {
  if (cfg.alpha.size() != 1) invalid("exactly one --alpha is required");
  return cfg.alpha.front();
}

const std::string& one_input(const JobConfig& cfg, const char* what) {
  if (cfg.inputs.size() != 1) invalid(std::string("exactly one ") + what + " is required");
  return cfg.inputs.front();
}

/// An F_q series from a JSON file (fq_series, or series over O_K reduced mod pi).
Series<FqElem> load_fq_series(const std::string& file) {
  const Json j = read_json(file);
  if (j.is_object() && j.value("kind", "") == "series") return reduce(ok_series_from_json(j, file));
  return fq_series_from_json(j, file);
}

/// A series file, or a comma list of integers (coefficients of x, x^2, ...)
/// over F_q at truncation D. Files are refit to D only when refit is set.
Series<FqElem> fq_series_arg(const JobConfig& cfg, const std::string& arg, int D, const char* what, bool refit = true) {
  if (arg.size() > 5 && arg.substr(arg.size() - 5) == ".json") {
    const Series<FqElem> s = load_fq_series(arg);
    if (!refit) return s;
    if (s.trunc() >= D) return s.truncated(D);
    Series<FqElem> r(s.ring(), D);
    for (int k = 1; k <= s.trunc(); ++k) r.set(k, s[k]);
    return r;
  }
  const auto c = parse_int_list(arg, what);
  if (static_cast<int>(c.size()) > D) invalid(std::string(what) + ": more coefficients than the truncation");
  const FqPtr k = Fq::make(cfg.p, cfg.f, standard_inertial_poly(cfg.p, cfg.f));
  Series<FqElem> s(k, D);
  for (std::size_t i = 0; i < c.size(); ++i) s.set(static_cast<int>(i) + 1, k->from_int(c[i]));
  return s;
}

std::string cell(const std::optional<long>& v) { return v ? std::to_string(*v) : "INFINITE_AT_PRECISION"; }

std::string rat(const Rational& r) { return to_json(r).get<std::string>(); }

// ---------------------------------------------------------------------------

int ring_info(const JobConfig& cfg, std::ostream& out) {
  const OKRingPtr R = make_ring(cfg, cfg.N);
  Json j{{"format", kFormatVersion}, {"kind", "ring_info"}};
  j["ring"] = to_json(R->spec());
  j["q"] = R->q();
  j["uniformizer"] = to_json(R->uniformizer());
  j["omega"] = to_json(R->omega());
  out << j.dump(2) << "\n";
  return 0;
}

int lt_build(const JobConfig& cfg, std::ostream& out) {
  const OKRingPtr R = lt_ring(cfg);
  const FormalGroupLawPtr G = FormalGroupLaw::build(FrobeniusSeries::standard(R), cfg.T, cfg.N);
  write_json(cfg, "F.json", to_json(*G));
  out << "q\tT\tN\tterms\n" << R->q() << "\t" << cfg.T << "\t" << cfg.N << "\t" << to_json(*G)["law"].size() << "\n";
  return 0;
}

int lt_endo(const JobConfig& cfg, std::ostream& out) {
  const OKRingPtr R = lt_ring(cfg);
  const Series<OKElem> s = lt_endo(FrobeniusSeries::standard(R), parse_elem(R, one_alpha(cfg)), cfg.D, cfg.N);
  write_json(cfg, "endo.json", to_json(s));
  out << s.to_string() << "\n";
  return 0;
}

int lt_reduce(const JobConfig& cfg, std::ostream& out) {
  const OKRingPtr R = lt_ring(cfg);
  const FormalGroupLawPtr G = FormalGroupLaw::build(FrobeniusSeries::standard(R), cfg.T, cfg.N);
  const Series<FqElem> s = reduce_endo(*G, parse_elem(R, one_alpha(cfg)), cfg.D);
  write_json(cfg, "reduce.json", to_json(s));
  out << s.to_string() << "\n";
  return 0;
}

int lt_check(const JobConfig& cfg, std::ostream& out) {
  FormalGroupLawPtr G;
  if (!cfg.inputs.empty()) {
    const std::string& in = one_input(cfg, "--input");
    G = group_from_json(read_json(in), in);
  } else {
    G = FormalGroupLaw::build(FrobeniusSeries::standard(lt_ring(cfg)), cfg.T, cfg.N);
  }
  const OKRingPtr& R = G->ring();
  // digits of [a] to degree D that the ring can vouch for
  const int hom_prec = std::min(G->target_prec(), R->prec() - working_precision(0, R->q(), cfg.D));
  if (hom_prec < 1) throw Error(ErrorCode::InsufficientPrecision, "ring precision too small for --deg");
  const AxiomReport ax = check_axioms(*G, G->target_prec());
  const LazardReport lz = lazard_compare(*G);

  // [a][b] = [ab] on sampled pairs
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::int64_t> pick(-50, 50);
  int hom_ok = 0;
  const int pairs = 10;
  for (int i = 0; i < pairs; ++i) {
    const OKElem a = R->from_int(pick(rng)), b = R->from_int(pick(rng));
    if (congruent(compose(G->endo(a, cfg.D), G->endo(b, cfg.D)), G->endo(a * b, cfg.D), hom_prec)) ++hom_ok;
  }
  out << "check\tresult\n";
  out << "identity\t" << ax.identity << "\ncommutative\t" << ax.commutative << "\nassociative\t" << ax.associative
      << "\nfrobenius_endo\t" << ax.frobenius_endo << "\nhomomorphism\t" << hom_ok << "/" << pairs << "\n";
  out << "lazard_plus\t" << lz.matched_plus << "\nlazard_minus\t" << lz.matched_minus << "\nlazard_target\t" << lz.target_degree
      << "\nlazard_sign\t" << lz.sign_convention << "\n";
  return ax.ok() && hom_ok == pairs ? 0 : exit_code_for(ErrorCode::ResidualNonzero);
}

int ram_profile(const JobConfig& cfg, std::ostream& out) {
  const NottElem sigma(fq_series_arg(cfg, one_input(cfg, "--series"), cfg.D, "--series", false));
  const RamProfile prof = ram_sequence(sigma, cfg.nmax);
  write_json(cfg, "profile.json", to_json(prof));
  out << "n\ti_n\n";
  for (std::size_t i = 0; i < prof.values.size(); ++i) out << i << "\t" << cell(prof.values[i]) << "\n";
  return prof.complete() ? 0 : exit_code_for(ErrorCode::InfiniteAtPrecision);
}

int ram_filtration(const JobConfig& cfg, std::ostream& out) {
  if (cfg.inputs.empty()) invalid("at least one --series is required");
  std::vector<NottElem> gens;
  for (const auto& f : cfg.inputs) gens.emplace_back(fq_series_arg(cfg, f, cfg.D, "--series", false));
  const FiniteFiltration filt = finite_quotient_filtration(gens, cfg.n);
  write_json(cfg, "filtration.json", to_json(filt));
  out << "break\tindex_after\n";
  for (std::size_t i = 0; i < filt.breaks.size(); ++i) out << filt.breaks[i] << "\t" << filt.indices[i] << "\n";
  return 0;
}

FiniteFiltration filtration_arg(const JobConfig& cfg) {
  if (!cfg.inputs.empty()) return filtration_from_json(read_json(one_input(cfg, "--filtration")), cfg.inputs.front());
  return synthetic_filtration(cfg.q, cfg.r, cfg.lmax);
}

int herbrand_phi(const JobConfig& cfg, std::ostream& out) {
  const PiecewiseLinear phi = phi_from_filtration(filtration_arg(cfg));
  write_json(cfg, "phi.json", to_json(phi));
  out << "from\tslope\n";
  for (std::size_t i = 0; i < phi.slopes().size(); ++i) out << rat(phi.breakpoints()[i]) << "\t" << rat(phi.slopes()[i]) << "\n";
  return 0;
}

int herbrand_breaks(const JobConfig& cfg, std::ostream& out) {
  const FiniteFiltration filt = filtration_arg(cfg);
  const auto u = upper_breaks(filt);
  Json j{{"format", kFormatVersion}, {"kind", "upper_breaks"}};
  j["lower"] = filt.breaks;
  Json up = Json::array();
  for (const auto& x : u) up.push_back(to_json(x));
  j["upper"] = up;
  write_json(cfg, "breaks.json", j);
  out << "lower\tupper\n";
  for (std::size_t i = 0; i < u.size(); ++i) out << filt.breaks[i] << "\t" << rat(u[i]) << "\n";
  return 0;
}

int herbrand_window(const JobConfig& cfg, std::ostream& out) {
  if (cfg.inputs.empty()) invalid("at least one --filtration is required");
  std::vector<FiniteFiltration> levels;
  for (const auto& f : cfg.inputs) levels.push_back(filtration_from_json(read_json(f), f));
  const WindowRatios w = criterion_window(levels);
  out << "min_ratio\tmax_ratio\n" << rat(w.min_ratio) << "\t" << rat(w.max_ratio) << "\n";
  return 0;
}

void print_report(const CriterionReport& rep, std::ostream& out) {
  out << "ratios";
  for (const auto& x : rep.ratios) out << "\t" << rat(x);
  out << "\nkappa\t" << (rep.kappa ? std::to_string(*rep.kappa) : "none") << "\nverdict\t" << to_string(rep.verdict) << "\n";
}

int verdict_code(const CriterionReport& rep) {
  return rep.verdict == Verdict::CharZeroConsistent ? 0 : exit_code_for(ErrorCode::HypothesisViolated);
}

int criterion_check(const JobConfig& cfg, std::ostream& out) {
  if (!cfg.inputs.empty()) {
    // an arbitrary series, tested against p^d
    const NottElem sigma(fq_series_arg(cfg, one_input(cfg, "--series"), cfg.D, "--series", false));
    const RamProfile prof = ram_sequence(sigma, cfg.nmax);
    const CriterionReport rep = ratio_check(prof, cfg.d);
    write_json(cfg, "criterion.json", to_json(rep));
    out << "n\ti_n\n";
    for (std::size_t i = 0; i < prof.values.size(); ++i) out << i << "\t" << cell(prof.values[i]) << "\n";
    print_report(rep, out);
    return prof.complete() ? verdict_code(rep) : exit_code_for(ErrorCode::InfiniteAtPrecision);
  }
  const RingSpec probe = RingSpec::standard(cfg.p, cfg.f, cfg.e, cfg.N);
  const OKRingPtr R0 = OKRing::make(probe);
  const OKElem a0 = parse_elem(R0, one_alpha(cfg));
  const auto lvl = unit_level(a0);
  if (!lvl) invalid("alpha = 1 at precision");
  const std::vector<int> degrees = predicted_degrees(probe, static_cast<int>(*lvl), cfg.nmax);
  const int top = *std::max_element(degrees.begin(), degrees.end());
  const OKRingPtr R = make_ring(cfg, std::max(cfg.N, working_precision(1, probe.q(), top)));
  const RamProfile prof = lt_profile(FrobeniusSeries::standard(R), parse_elem(R, one_alpha(cfg)), degrees);
  const CriterionReport rep = ratio_check(prof, cfg.e * cfg.f);
  write_json(cfg, "criterion.json", to_json(rep));
  out << "n\ti_n\tpredicted\n";
  for (std::size_t i = 0; i < prof.values.size(); ++i)
    out << i << "\t" << cell(prof.values[i]) << "\t" << predict_in(static_cast<int>(*lvl), static_cast<int>(i), probe) << "\n";
  print_report(rep, out);
  return verdict_code(rep);
}

int criterion_predict(const JobConfig& cfg, std::ostream& out) {
  if (cfg.closed_form) {
    out << "n\ti_n\n" << cfg.n << "\t" << closed_form_predict(cfg.i0, cfg.i1, cfg.d, cfg.p, cfg.n) << "\n";
    return 0;
  }
  const RingSpec spec = RingSpec::standard(cfg.p, cfg.f, cfg.e, cfg.N);
  out << "l\tn\ti_n\n" << cfg.l << "\t" << cfg.n << "\t" << predict_in(cfg.l, cfg.n, spec) << "\n";
  return 0;
}

int lift_zspace(const JobConfig& cfg, std::ostream& out) {
  // the window analysis looks up to twice the requested degree
  const Series<FqElem> zeta = fq_series_arg(cfg, cfg.zeta, 2 * cfg.D, "--zeta");
  const Series<FqElem> mu = fq_series_arg(cfg, cfg.mu, 2 * cfg.D, "--mu");
  const LevelSpace L = level_space(zeta, mu, cfg.D, cfg.level);
  write_json(cfg, "zspace.json", to_json(L));
  out << "dim_Z\tdim_Zo\tdim_B\tquotient_dim\twindow_quotient_dim\n"
      << L.dim_Z() << "\t" << L.dim_Zo() << "\t" << L.dim_B() << "\t" << L.quotient_dim << "\t" << L.window_quotient_dim() << "\n";
  return 0;
}

int lift_rectify(const JobConfig& cfg, std::ostream& out) {
  const std::string& in = one_input(cfg, "--input");
  const Series<OKElem> g = ok_series_from_json(read_json(in), in);
  const OKRingPtr& R = g.ring();
  const FormalGroupLawPtr G = FormalGroupLaw::build(FrobeniusSeries::standard(R), cfg.T, cfg.target);
  if (cfg.oracle.empty()) invalid("--oracle is required");
  const OracleSource src = oracle_from_json(R, G, read_json(cfg.oracle), cfg.oracle);
  const RectifyResult res = rectify(g, src.oracle(), *G, cfg.target);
  const Json j = to_json(res);
  write_json(cfg, "psi.json", j["psi"]);
  Json t{{"format", kFormatVersion}, {"kind", "rectify_transcript"}};
  t["beta"] = j["beta"];
  t["alpha"] = j["alpha"];
  t["achieved_level"] = res.achieved_level;
  t["levels"] = j["transcript"];
  write_json(cfg, "transcript.json", t);
  out << "beta\t" << res.beta.to_string() << "\nachieved_level\t" << res.achieved_level << "\n";
  out << "r\tbefore\tafter\treopened\n";
  for (const auto& rec : res.transcript) out << rec.r << "\t" << rec.before << "\t" << rec.after << "\t" << rec.reopened << "\n";
  return 0;
}

int lift_case1(const JobConfig& cfg, std::ostream& out) {
  const std::string& in = one_input(cfg, "--input");
  const Series<OKElem> g = ok_series_from_json(read_json(in), in);
  if (cfg.u_file.empty()) invalid("--u is required");
  const Series<OKElem> u = ok_series_from_json(g.ring(), read_json(cfg.u_file), cfg.u_file);
  const Series<OKElem> h = case1_reduce(g, u);
  write_json(cfg, "h.json", to_json(h));
  out << h.to_string() << "\n";
  return 0;
}

void check_threads_env() {
  if (const char* env = std::getenv("RAMFORGE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*env == '\0' || *end != '\0' || v < 1) invalid("RAMFORGE_THREADS must be a positive integer");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

Json to_json(const JobConfig& c) {
  return Json{{"format", kFormatVersion}, {"kind", "job"},        {"command", c.command}, {"subcommand", c.subcommand},
              {"p", c.p},                  {"f", c.f},             {"e", c.e},             {"N", c.N},
              {"T", c.T},                  {"D", c.D},             {"alpha", c.alpha},     {"inputs", c.inputs},
              {"oracle", c.oracle},        {"u", c.u_file},        {"zeta", c.zeta},       {"mu", c.mu},
              {"nmax", c.nmax},            {"n", c.n},             {"l", c.l},             {"d", c.d},
              {"level", c.level},          {"target", c.target},   {"q", c.q},             {"r", c.r},
              {"lmax", c.lmax},            {"i0", c.i0},           {"i1", c.i1},           {"closed_form", c.closed_form},
              {"outdir", c.outdir},        {"seed", c.seed}};
}

JobConfig job_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, path + ": expected an object");
  if (j.value("format", 0) != kFormatVersion || j.value("kind", "") != "job")
    throw Error(ErrorCode::SchemaError, path + ": expected a format 1 \"job\" document");
  JobConfig c;
  const auto get = [&](const char* key, auto& dst) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    try {
      dst = it->get<std::decay_t<decltype(dst)>>();
    } catch (const Json::exception&) {
      throw Error(ErrorCode::SchemaError, path + "." + key + ": wrong type");
    }
  };
  get("command", c.command);
  get("subcommand", c.subcommand);
  get("p", c.p);
  get("f", c.f);
  get("e", c.e);
  get("N", c.N);
  get("T", c.T);
  get("D", c.D);
  get("alpha", c.alpha);
  get("inputs", c.inputs);
  get("oracle", c.oracle);
  get("u", c.u_file);
  get("zeta", c.zeta);
  get("mu", c.mu);
  get("nmax", c.nmax);
  get("n", c.n);
  get("l", c.l);
  get("d", c.d);
  get("level", c.level);
  get("target", c.target);
  get("q", c.q);
  get("r", c.r);
  get("lmax", c.lmax);
  get("i0", c.i0);
  get("i1", c.i1);
  get("closed_form", c.closed_form);
  get("outdir", c.outdir);
  get("seed", c.seed);
  return c;
}

JobConfig parse_args(const std::vector<std::string>& args) {
  JobConfig c;
  CLI::App app{"ramforge", "ramforge"};
  app.require_subcommand(1);
  std::string config;
  app.add_option("--config", config, "job document (JSON)");

  const auto ring_opts = [&](CLI::App* s) {
    s->add_option("--p", c.p, "residue characteristic");
    s->add_option("--f", c.f, "residue degree");
    s->add_option("--e", c.e, "ramification index");
    s->add_option("--N", c.N, "pi-adic precision");
    s->add_option_function<std::string>(
        "--ring",
        [&c](const std::string& v) {
          const auto t = parse_int_list(v, "--ring");
          if (t.size() != 3) invalid("--ring: expected p,f,e");
          c.p = static_cast<int>(t[0]);
          c.f = static_cast<int>(t[1]);
          c.e = static_cast<int>(t[2]);
        },
        "p,f,e");
  };
  // for series given as coefficient lists
  const auto field_opts = [&](CLI::App* s) {
    s->add_option("--p", c.p, "residue characteristic");
    s->add_option("--f", c.f, "residue degree");
    s->add_option("--deg", c.D, "x-degree truncation");
  };
  const auto common = [&](CLI::App* s) {
    s->add_option("--outdir", c.outdir, "directory for JSON artifacts");
    s->add_option("--seed", c.seed, "seed for sampled checks");
  };
  struct Leaf {
    const char* cmd;
    const char* sub;
    CLI::App* app;
  };
  std::vector<Leaf> leaves;
  const auto leaf = [&](CLI::App* parent, const char* cmd, const char* sub, const char* help) {
    CLI::App* s = parent->add_subcommand(sub, help);
    common(s);
    leaves.push_back({cmd, sub, s});
    return s;
  };

  CLI::App* lt = app.add_subcommand("lt", "Lubin-Tate groups");
  lt->require_subcommand(1);
  CLI::App* s = leaf(lt, "lt", "build", "build F for pi x + x^q, write F.json");
  ring_opts(s);
  s->add_option("--T", c.T, "total-degree truncation");
  s = leaf(lt, "lt", "endo", "write [alpha] to endo.json");
  ring_opts(s);
  s->add_option("--alpha", c.alpha)->required();
  s->add_option("--deg", c.D, "x-degree truncation");
  s = leaf(lt, "lt", "reduce", "reduction of [alpha], reduce.json");
  ring_opts(s);
  s->add_option("--T", c.T);
  s->add_option("--alpha", c.alpha)->required();
  s->add_option("--deg", c.D);
  s = leaf(lt, "lt", "check", "axioms, homomorphism samples and the Lazard comparison");
  ring_opts(s);
  s->add_option("--input", c.inputs, "check a stored F.json instead of building one");
  s->add_option("--T", c.T);
  s->add_option("--deg", c.D);

  CLI::App* ram = app.add_subcommand("ram", "ramification numbers");
  ram->require_subcommand(1);
  s = leaf(ram, "ram", "profile", "i_n(sigma) for n <= nmax, profile.json");
  s->add_option("--series", c.inputs)->required();
  field_opts(s);
  s->add_option("--nmax", c.nmax);
  s = leaf(ram, "ram", "filtration", "filtration of the quotient by p^n-th powers, filtration.json");
  s->add_option("--series", c.inputs)->required();
  field_opts(s);
  s->add_option("--n", c.n);

  CLI::App* hb = app.add_subcommand("herbrand", "Hasse-Herbrand functions");
  hb->require_subcommand(1);
  for (const char* name : {"phi", "breaks"}) {
    s = leaf(hb, "herbrand", name, name == std::string("phi") ? "phi of a filtration, phi.json" : "upper breaks, breaks.json");
    s->add_option("--filtration", c.inputs);
    s->add_option("--q", c.q, "synthetic filtration: q");
    s->add_option("--r", c.r, "synthetic filtration: first level");
    s->add_option("--lmax", c.lmax, "synthetic filtration: last level");
  }
  s = leaf(hb, "herbrand", "window", "min and max break ratios over levels");
  s->add_option("--filtration", c.inputs)->required();

  CLI::App* cr = app.add_subcommand("criterion", "ratio criterion");
  cr->require_subcommand(1);
  s = leaf(cr, "criterion", "check", "profile of [alpha] and its ratio test, criterion.json");
  ring_opts(s);
  CLI::Option* alpha = s->add_option("--alpha", c.alpha);
  s->add_option("--series", c.inputs, "Nottingham element instead of [alpha]")->excludes(alpha);
  s->add_option("--nmax", c.nmax);
  s->add_option("--d", c.d, "exponent d of p^d for --series");
  s->add_option("--deg", c.D, "x-degree truncation for --series lists");
  s = leaf(cr, "criterion", "predict", "q^(l+ne) - 1, or the closed form from i_0, i_1");
  ring_opts(s);
  s->add_option("--l", c.l);
  s->add_option("--n", c.n);
  s->add_flag("--closed-form", c.closed_form);
  s->add_option("--i0", c.i0);
  s->add_option("--i1", c.i1);
  s->add_option("--d", c.d);

  CLI::App* lf = app.add_subcommand("lift", "lifting commuting pairs");
  lf->require_subcommand(1);
  s = leaf(lf, "lift", "zspace", "dimensions of Z, Z^o, B, zspace.json");
  field_opts(s);
  s->add_option("--zeta", c.zeta)->required();
  s->add_option("--mu", c.mu)->required();
  s->add_option("--level", c.level);
  s = leaf(lf, "lift", "rectify", "conjugate g to [beta], psi.json and transcript.json");
  s->add_option("--input", c.inputs)->required();
  s->add_option("--oracle", c.oracle)->required();
  s->add_option("--target", c.target);
  s->add_option("--T", c.T);
  s = leaf(lf, "lift", "case1", "h = g o u^-1, h.json");
  s->add_option("--input", c.inputs)->required();
  s->add_option("--u", c.u_file)->required();

  CLI::App* rg = app.add_subcommand("ring", "rings");
  rg->require_subcommand(1);
  s = leaf(rg, "ring", "info", "presentation of O_K");
  ring_opts(s);

  // --config alone replaces the command line
  if (args.size() == 2 && args[0] == "--config") {
    const std::string file = args[1];
    std::ifstream in(file);
    if (!in) invalid("cannot open \"" + file + "\"");
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::SchemaError, file + ": " + e.what());
    }
    return job_from_json(j, file);
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    throw;
  } catch (const CLI::ParseError& e) {
    invalid(e.what());
  }
  for (const Leaf& lv : leaves)
    if (lv.app->parsed()) {
      c.command = lv.cmd;
      c.subcommand = lv.sub;
    }
  if (c.command.empty()) invalid("no command given");
  return c;
}

int run(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    check_threads_env();
    const std::string k = cfg.command + " " + cfg.subcommand;
    if (k == "ring info") return ring_info(cfg, out);
    if (k == "lt build") return lt_build(cfg, out);
    if (k == "lt endo") return lt_endo(cfg, out);
    if (k == "lt reduce") return lt_reduce(cfg, out);
    if (k == "lt check") return lt_check(cfg, out);
    if (k == "ram profile") return ram_profile(cfg, out);
    if (k == "ram filtration") return ram_filtration(cfg, out);
    if (k == "herbrand phi") return herbrand_phi(cfg, out);
    if (k == "herbrand breaks") return herbrand_breaks(cfg, out);
    if (k == "herbrand window") return herbrand_window(cfg, out);
    if (k == "criterion check") return criterion_check(cfg, out);
    if (k == "criterion predict") return criterion_predict(cfg, out);
    if (k == "lift zspace") return lift_zspace(cfg, out);
    if (k == "lift rectify") return lift_rectify(cfg, out);
    if (k == "lift case1") return lift_case1(cfg, out);
    invalid("unknown command \"" + k + "\"");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(ErrorCode::InvalidArgument);
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  JobConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const CLI::CallForHelp&) {
    out << "usage: ramforge {lt build|endo|reduce|check, ram profile|filtration, herbrand phi|breaks|window,\n"
           "                 criterion check|predict, lift zspace|rectify|case1, ring info} [options]\n"
           "       ramforge --config job.json\n";
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return run(cfg, out, err);
}

}  // namespace ramforge
