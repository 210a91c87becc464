#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nak/element.hpp"
#include "nak/error.hpp"
#include "nak/exceptional.hpp"
#include "nak/experiments.hpp"
#include "nak/io.hpp"
#include "nak/measures.hpp"
#include "nak/scaling.hpp"
#include "nak/special.hpp"

namespace {

using namespace nak;

// Exit contract: 0 all verdicts pass, 1 any verdict fails, 2 bad configuration.
constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct GlobalOpts {
  long p = 0;              // 0 = use the verb's default prime
  std::string field_char = "0";  // "0" -> Q_p, "p" -> F_p((t))
  uint64_t seed = 1;
  long precision = 0;  // 0 = use the verb's default
  std::string json_path;
  std::string csv_path;
};

FieldSpec field_of(const GlobalOpts& g, long default_p) {
  long p = g.p > 0 ? g.p : default_p;
  return g.field_char == "0" ? field_Qp(p) : field_Fpt(p);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), errc::invalid_input, "cannot open " + path);
  out << text;
  require(out.good(), errc::invalid_input, "short write to " + path);
}

Rational parse_rational(const std::string& text) {
  try {
    Rational r(text);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    fail(errc::invalid_input, "not a rational: " + text);
  }
}

void emit_report(const RunReport& r, const GlobalOpts& g) {
  if (!g.json_path.empty()) write_file(g.json_path, report_to_json(r).dump(2) + "\n");
  if (!g.csv_path.empty()) write_file(g.csv_path, report_to_csv(r));
  for (const ReportSection& sec : r.sections) {
    std::printf("section %s\n", sec.name.c_str());
    for (const FrequencyReport& fr : sec.levels)
      std::printf("  level %ld: n=%ld discrepancy=%s (%.6f)\n", fr.level, fr.n_terms,
                  fr.discrepancy.get_str().c_str(), rat_shadow(fr.discrepancy));
    for (const Verdict& v : sec.verdicts)
      std::printf("  [%s] %s: %s %s %s\n", v.pass ? "PASS" : "FAIL", v.name.c_str(),
                  v.lhs.get_str().c_str(), v.relation.c_str(), v.rhs.get_str().c_str());
  }
  bool any = false;
  for (const ReportSection& sec : r.sections) any = any || !sec.verdicts.empty();
  if (any)
    std::printf("overall: %s (%.2fs)\n", r.all_pass() ? "PASS" : "FAIL", r.wall_seconds);
  else
    std::printf("overall: data only, no verdicts (%.2fs)\n", r.wall_seconds);
}

int run_ud(const GlobalOpts& g, const ExperimentConfig& base, const std::string& x_text,
           const std::string& alpha_text, const std::string& ratio_text, bool filter_given,
           const std::string& filter_name_arg) {
  ExperimentConfig cfg = base;
  cfg.field = field_of(g, 5);
  cfg.seed = g.seed;
  if (g.precision > 0) cfg.sample_digits = g.precision;
  if (!ratio_text.empty()) {
    cfg.kind = GenKind::geometric;
    cfg.companion = parse_elem(ratio_text);
  }
  if (!alpha_text.empty()) {
    require(ratio_text.empty(), errc::invalid_configuration,
            "give either a coefficient or a ratio, not both");
    cfg.companion = parse_elem(alpha_text);
  }
  if (!x_text.empty()) cfg.x = parse_elem(x_text);
  if (filter_given) {
    if (filter_name_arg == "all") cfg.filter = OrbitFilter::all;
    else if (filter_name_arg == "coprime") cfg.filter = OrbitFilter::coprime;
    else if (filter_name_arg == "exact") cfg.filter = OrbitFilter::exact_power;
    else if (filter_name_arg == "not") cfg.filter = OrbitFilter::not_power;
    else fail(errc::invalid_configuration, "unknown filter " + filter_name_arg);
  } else if (cfg.field.is_char_p() && cfg.kind == GenKind::power && !cfg.exploratory) {
    cfg.filter = OrbitFilter::coprime;  // the convergent subsequence in char p
  }
  RunReport r = run_koksma(cfg);
  emit_report(r, g);
  return r.all_pass() ? kExitPass : kExitFail;
}

int run_charp_verb(const GlobalOpts& g, const ExperimentConfig& base, const std::string& x_text) {
  ExperimentConfig cfg = base;
  cfg.field = g.field_char == "0" ? field_Fpt(g.p > 0 ? g.p : 2) : field_of(g, 2);
  cfg.seed = g.seed;
  if (g.precision > 0) cfg.sample_digits = g.precision;
  if (!x_text.empty()) cfg.x = parse_elem(x_text);
  RunReport r = run_char_p(cfg);
  emit_report(r, g);
  return r.all_pass() ? kExitPass : kExitFail;
}

int run_oracle_verb(const GlobalOpts& g, long max_lambda, long target_level) {
  RunReport r = run_oracles(field_of(g, 3), max_lambda, target_level);
  emit_report(r, g);
  return r.all_pass() ? kExitPass : kExitFail;
}

// Unit of norm q^L with a deep sampled-looking tail of zeros: enough digits
// that every certified row keeps its constraint depth resolved.
Elem deep_center(const FieldSpec& fs, long L, long prec) {
  std::vector<uint32_t> d(static_cast<size_t>(prec + L), 0);
  d[0] = 1;
  return make_elem(fs, -L, d);
}

std::vector<long> inert_integers(long p, long K, long count) {
  std::vector<long> out;
  long pK = 1;
  for (long i = 0; i < K; ++i) pK *= p;
  for (long m = 2; static_cast<long>(out.size()) < count; ++m)
    if (m % pK != 0) out.push_back(m);
  return out;
}

Json certificate_summary(const ConstructedPoint& cp, const MoranSchedule& s, long horizon) {
  Json j;
  j["schema"] = "nak-report/1";
  j["runner"] = "construct";
  j["x"] = elem_to_json(cp.x);
  j["certificate"] = certificate_to_json(cp.cert);
  BranchLevels bl = branch_levels(s, horizon);
  j["branch_levels"] = bl.levels;
  return j;
}

int run_construct_mahler(const GlobalOpts& g, long count) {
  const long p = g.p > 0 ? g.p : 2;
  require(p == 2, errc::invalid_configuration, "the even-integer-part point lives in Q_2");
  const long prec = g.precision > 0 ? g.precision : 64;
  if (count <= 0) count = prec;
  FieldSpec q2 = field_Qp(2);

  MoranSchedule s = mahler_schedule(count);
  Elem beta = from_rational(q2, Rational(3, 2), prec + 16);
  std::vector<ScalingMapSpec> maps;
  for (long n = 0; n < count; ++n) maps.push_back(make_geometric_map(beta, BigInt(n)));
  Elem center = from_rational(q2, Rational(1, 2), prec + 1);

  ConstructedPoint cp = construct_point(maps, s, Disk{center, 0}, prec, 8);
  BranchLevels bl = branch_levels(s, count);
  std::printf("x = %s\n", format_elem(cp.x).c_str());
  std::printf("certificate: %s (%zu rows)\n", cp.cert.pass ? "PASS" : "FAIL",
              cp.cert.rows.size());
  std::printf("branch levels below %ld: %zu\n", count, bl.levels.size());
  if (!g.json_path.empty()) write_file(g.json_path, certificate_summary(cp, s, count).dump(2) + "\n");
  return cp.cert.pass ? kExitPass : kExitFail;
}

int run_construct_prop61(const GlobalOpts& g, long K, long H, long L, long count) {
  const long p = g.p > 0 ? g.p : 3;
  const long prec = g.precision > 0 ? g.precision : 200;
  FieldSpec fs = field_Qp(p);

  MoranSchedule s = prop61_schedule(p, K, H, L, count);
  std::vector<long> ms = inert_integers(p, K, count);
  Elem alpha = one_elem(fs, prec + 2 * L);
  Elem center = deep_center(fs, L, prec);
  std::vector<ScalingMapSpec> maps;
  for (long m : ms) maps.push_back(make_power_map(alpha, BigInt(m), center));

  ConstructedPoint cp = construct_point(maps, s, Disk{center, 1}, prec, 8);
  GammaDim gd = gamma_dim(s, count);
  std::printf("x = %s\n", format_elem(cp.x).c_str());
  std::printf("certificate: %s (%zu rows)\n", cp.cert.pass ? "PASS" : "FAIL",
              cp.cert.rows.size());
  std::printf("dimension: %s", dim_prop61(p, K, H, L).get_str().c_str());
  std::printf(" (liminf over %ld entries: %.9f)\n", count, rat_shadow(gd.liminf_estimate));
  if (!g.json_path.empty()) {
    Json j = certificate_summary(cp, s, count);
    j["dimension"] = rational_to_json(dim_prop61(p, K, H, L));
    write_file(g.json_path, j.dump(2) + "\n");
  }
  return cp.cert.pass ? kExitPass : kExitFail;
}

long exact_log(long q, long value) {
  require(value >= 1, errc::invalid_input, "norm must be a positive power of q");
  long e = 0, v = value;
  while (v > 1) {
    require(v % q == 0, errc::invalid_input, "norm is not a power of the residue size");
    v /= q;
    ++e;
  }
  return e;
}

void print_exact(const char* label, const Rational& r) {
  std::printf("%s = %s (%.9f)\n", label, r.get_str().c_str(), rat_shadow(r));
}

int run_pisot(const GlobalOpts& g, long k, long l, long n_max) {
  PisotChabautySpec spec;
  spec.p = g.p > 0 ? g.p : 3;
  spec.k = k;
  spec.l = l;
  const long prec = g.precision > 0 ? g.precision : (k + l) * n_max + 16;
  LimitPointTable t = limit_point_table(spec, n_max, prec);
  std::printf("xi in Q_%ld with |xi| = %ld^%ld, floors settle at n0 = %ld\n", spec.p, spec.p,
              spec.k, t.n0);
  std::printf("%4s  %-12s %-12s %-12s %s\n", "n", "|xi^n-T_n|", "|[xi^n]|", "|[xi^n]+1|",
              "[T_n]");
  bool ok = true;
  for (const LimitRow& r : t.rows) {
    std::printf("%4ld  %-12s %-12s%c %-12s%c %s\n", r.n, r.norm_err.get_str().c_str(),
                r.norm_int.get_str().c_str(), r.int_vanishes ? '*' : ' ',
                r.norm_int_p1.get_str().c_str(), r.int_p1_vanishes ? '*' : ' ',
                r.floor_known ? (r.floor_in_set ? std::to_string(r.floor_trace).c_str() : "out")
                              : "-");
    if (r.floor_known && !r.floor_in_set) ok = false;
  }
  if (!g.json_path.empty()) write_file(g.json_path, limit_table_to_json(t).dump(2) + "\n");
  if (!g.csv_path.empty()) write_file(g.csv_path, limit_table_csv(t));
  return ok ? kExitPass : kExitFail;
}

int run_element(const GlobalOpts& g, const std::string& text, const std::string& mul_text,
                const std::string& add_text, long pow_n, bool want_invert, long cell_level) {
  Elem x = parse_elem(text);
  if (!mul_text.empty()) x = mul(x, parse_elem(mul_text));
  if (!add_text.empty()) x = add(x, parse_elem(add_text));
  if (pow_n != 1) x = pow_elem(x, BigInt(pow_n));
  if (want_invert) x = invert(x);
  std::printf("%s\n", format_elem(x).c_str());
  std::printf("norm = %s, valuation = %s, abs precision = %ld\n", norm_value(x).get_str().c_str(),
              valuation(x) ? std::to_string(*valuation(x)).c_str() : "+inf", x.abs_prec);
  if (!x.d.empty()) {
    std::printf("integral part = %s\n", format_elem(integral_part(x)).c_str());
    std::printf("fractional part = %s\n", format_elem(fractional_part(x)).c_str());
  }
  if (cell_level > 0)
    std::printf("level-%ld cell = %ld\n", cell_level, cell_id_of(x, cell_level));
  if (!g.json_path.empty()) {
    Json j;
    j["schema"] = "nak-report/1";
    j["runner"] = "element";
    j["x"] = elem_to_json(x);
    write_file(g.json_path, j.dump(2) + "\n");
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact arithmetic and seeded experiments for integral parts over local fields"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--p", g.p, "prime of the field");
  app.add_option("--char", g.field_char, "field characteristic: 0 for Q_p, p for F_p((t))")
      ->check(CLI::IsMember({"0", "p"}));
  app.add_option("--seed", g.seed, "master seed for sampled points");
  app.add_option("--precision", g.precision, "working precision in digits");
  app.add_option("--json", g.json_path, "write the full report as JSON to this path");
  app.add_option("--csv", g.csv_path, "write plot-ready frequencies as CSV to this path");

  ExperimentConfig ud_cfg;
  std::string ud_x, ud_alpha, ud_ratio, ud_filter = "all";
  CLI::App* ud = app.add_subcommand("ud", "uniformity of ([a x^n]) or ([b^n x]) vs Haar");
  ud->fallthrough();
  ud->add_option("--n", ud_cfg.N, "number of kept terms")->default_val(100000);
  ud->add_option("--level", ud_cfg.levels, "cell depths to score")->delimiter(',');
  ud->add_option("--radius", ud_cfg.sphere_radius, "sample x with |x| = q^radius");
  ud->add_option("--trial", ud_cfg.trial, "trial index within the seed's stream");
  ud->add_option("--x", ud_x, "explicit point instead of a sampled one");
  ud->add_option("--alpha", ud_alpha, "power coefficient (default 1)");
  ud->add_option("--ratio", ud_ratio, "geometric ratio b; switches to ([b^n x])");
  CLI::Option* fopt =
      ud->add_option("--filter", ud_filter, "exponent subsequence: all|coprime|exact|not");
  ud->add_option("--k", ud_cfg.filter_k, "filter order K");
  ud->add_flag("--exploratory", ud_cfg.exploratory,
               "report frequencies without verdicts (open general-coefficient case in char p)");

  ExperimentConfig cp_cfg;
  cp_cfg.levels = {2};
  std::string cp_x;
  CLI::App* cp = app.add_subcommand("charp", "hull, mu_k, and mu* study of ([x^n]) in char p");
  cp->fallthrough();
  cp->add_option("--n", cp_cfg.N, "exponent range")->default_val(20000);
  cp->add_option("--level", cp_cfg.levels, "cell depths to score")->delimiter(',');
  cp->add_option("--radius", cp_cfg.sphere_radius, "sample x with |x| = q^radius");
  cp->add_option("--trial", cp_cfg.trial, "trial index within the seed's stream");
  cp->add_option("--x", cp_x, "explicit point instead of a sampled one");
  cp->add_option("--k", cp_cfg.filter_k, "exact-power filter order");

  long or_max_lambda = 3, or_target = 2;
  CLI::App* orc = app.add_subcommand("oracle", "exhaustive invariance and decorrelation grids");
  orc->fallthrough();
  orc->add_option("--max-lambda", or_max_lambda, "largest scaling exponent in the grid");
  orc->add_option("--target-level", or_target, "cell depth the fibers are counted at");

  CLI::App* con = app.add_subcommand("construct", "digit-by-digit exceptional points");
  con->fallthrough();
  con->require_subcommand(1);
  long con_count_m = 0, con_count_p = 60, con_K = 1, con_H = 1, con_L = 6;
  CLI::App* con_mahler =
      con->add_subcommand("mahler", "the unique x in D(1/2,1) with [x (3/2)^n] all even");
  con_mahler->fallthrough();
  con_mahler->add_option("--count", con_count_m, "constraint rows (default: precision)");
  CLI::App* con_p61 =
      con->add_subcommand("prop61", "point whose inert-exponent powers share one cell");
  con_p61->fallthrough();
  con_p61->add_option("--K", con_K, "inert modulus exponent");
  con_p61->add_option("--H", con_H, "pinned digits per row");
  con_p61->add_option("--L", con_L, "norm exponent of the point");
  con_p61->add_option("--count", con_count_p, "constraint rows");

  CLI::App* dim = app.add_subcommand("dim", "closed-form and schedule dimensions");
  dim->fallthrough();
  dim->require_subcommand(1);
  long d_K = 1, d_H = 1, d_L = 10, d_m = 2, d_q = 5, d_znorm = 5, d_tau = 5;
  std::string d_eta = "1/2", d_eps = "1/4", d_rho = "1/2", d_weights = "1/2,1/2";
  std::string d_lrule = "2n", d_hrule = "1";
  long d_H0 = 0, d_count = 1000, d_horizon = 0;
  CLI::App* dim_p61 = dim->add_subcommand("prop61", "power-map family dimension");
  dim_p61->fallthrough();
  dim_p61->add_option("--K", d_K);
  dim_p61->add_option("--H", d_H);
  dim_p61->add_option("--L", d_L);
  CLI::App* dim_p71 = dim->add_subcommand("prop71", "eta-eps family dimension");
  dim_p71->fallthrough();
  dim_p71->add_option("--eta", d_eta);
  dim_p71->add_option("--eps", d_eps);
  CLI::App* dim_p72 = dim->add_subcommand("prop72", "geometric family dimension");
  dim_p72->fallthrough();
  dim_p72->add_option("--q", d_q, "residue field size");
  dim_p72->add_option("--z-norm", d_znorm, "|z| as an integer power of q");
  dim_p72->add_option("--tau", d_tau, "ratio norm as an integer power of q");
  CLI::App* dim_freq = dim->add_subcommand("freq", "digit-frequency set dimension");
  dim_freq->fallthrough();
  dim_freq->add_option("--m", d_m, "alphabet size");
  dim_freq->add_option("--rho", d_rho, "contraction ratio");
  dim_freq->add_option("--weights", d_weights, "target frequencies, comma separated");
  CLI::App* dim_g = dim->add_subcommand("gamma", "liminf dimension of a schedule rule");
  dim_g->fallthrough();
  dim_g->add_option("--lambda-rule", d_lrule, "row depths, e.g. 2n or n+3");
  dim_g->add_option("--h-rule", d_hrule, "pinned digits per row");
  dim_g->add_option("--H0", d_H0);
  dim_g->add_option("--count", d_count);
  dim_g->add_option("--horizon", d_horizon, "ratio horizon (default: count)");

  long pi_k = 2, pi_l = 1, pi_nmax = 40;
  CLI::App* pis = app.add_subcommand("pisot", "trace-vs-power table for ([xi^n])");
  pis->fallthrough();
  pis->add_option("--k", pi_k, "norm exponent of xi");
  pis->add_option("--l", pi_l, "conjugate smallness exponent");
  pis->add_option("--n-max", pi_nmax, "table length");

  std::string el_text, el_mul, el_add;
  long el_pow = 1, el_cell = 0;
  bool el_inv = false;
  CLI::App* el = app.add_subcommand("element", "parse, evaluate, and format one element");
  el->fallthrough();
  el->add_option("text", el_text, "element literal, e.g. Qp{p=5; v=-1; digits=1,2; prec=2}")
      ->required();
  el->add_option("--mul", el_mul, "multiply by this element");
  el->add_option("--add", el_add, "add this element");
  el->add_option("--pow", el_pow, "raise to this integer power");
  el->add_flag("--invert", el_inv, "invert the result");
  el->add_option("--cell-level", el_cell, "also print the cell id at this depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (ud->parsed())
      return run_ud(g, ud_cfg, ud_x, ud_alpha, ud_ratio, fopt->count() > 0, ud_filter);
    if (cp->parsed()) return run_charp_verb(g, cp_cfg, cp_x);
    if (orc->parsed()) return run_oracle_verb(g, or_max_lambda, or_target);
    if (con->parsed()) {
      if (con_mahler->parsed()) return run_construct_mahler(g, con_count_m);
      return run_construct_prop61(g, con_K, con_H, con_L, con_count_p);
    }
    if (dim->parsed()) {
      const long p = g.p > 0 ? g.p : (dim_p61->parsed() ? 2 : 3);
      if (dim_p61->parsed()) {
        print_exact("dimension", dim_prop61(p, d_K, d_H, d_L));
      } else if (dim_p71->parsed()) {
        print_exact("dimension", dim_prop71(parse_rational(d_eta), parse_rational(d_eps)));
      } else if (dim_p72->parsed()) {
        print_exact("dimension", dim_prop72(Rational(exact_log(d_q, d_znorm)),
                                            Rational(exact_log(d_q, d_tau))));
      } else if (dim_freq->parsed()) {
        std::vector<Rational> P;
        std::stringstream ss(d_weights);
        std::string part;
        while (std::getline(ss, part, ',')) P.push_back(parse_rational(part));
        std::printf("dimension = %.9f\n", freq_set_dim(d_m, parse_rational(d_rho), P));
      } else {
        MoranSchedule s = schedule_from_rules(d_lrule, d_hrule, d_H0, d_count);
        GammaDim gd = gamma_dim(s, d_horizon > 0 ? d_horizon : d_count);
        print_exact("liminf", gd.liminf_estimate);
        if (gd.analytic_limit) print_exact("limit", *gd.analytic_limit);
      }
      return kExitPass;
    }
    if (pis->parsed()) return run_pisot(g, pi_k, pi_l, pi_nmax);
    if (el->parsed()) return run_element(g, el_text, el_mul, el_add, el_pow, el_inv, el_cell);
  } catch (const nak::error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}
