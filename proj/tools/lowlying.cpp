// Command-line front end: moments, rank, conductor, sieve, density, predict,
// verify-kernels and report.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lowlying/density.hpp"
#include "lowlying/family.hpp"
#include "lowlying/modarith.hpp"
#include "lowlying/predict.hpp"
#include "lowlying/sqsieve.hpp"
#include "lowlying/tate.hpp"
#include "lowlying/testfn.hpp"

using namespace lowlying;
using json = nlohmann::ordered_json;

namespace {

std::string real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class Csv {
 public:
  explicit Csv(std::ostream& os) : os_(os) {}
  Csv& row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << field(cells[i]);
    os_ << "\r\n";
    return *this;
  }

 private:
  std::ostream& os_;
};

/// Output sink: the named file, or stdout for "" and "-".
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw InvalidInput("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

FamilyDef load_family(const std::string& name) {
  for (const auto& p : preset_names())
    if (p == name) return preset(name);
  if (name == "F2plus" || name == "F2minus") return preset(name);
  if (!std::filesystem::exists(name)) throw InvalidInput("unknown family '" + name + "' (not a preset or a file)");
  std::ifstream in(name);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("malformed family config '" + name + "': " + e.what());
  }
  return family_from_json(j);
}

json conjecture_notes(const FamilyDef& f) {
  json notes = json::array();
  notes.push_back("GRH: the explicit-formula reading of the prime sums as zero statistics assumes GRH for L(s, E_t)");
  notes.push_back("BSD: rank corrections are interpreted as zeros at the critical point only under BSD");
  if (abc_flag(f)) notes.push_back("ABC: radical(Delta) has an irreducible factor of degree >= 4; sieving to the full family assumes ABC or the square-free sieve conjecture");
  return notes;
}

void dump(std::ostream& os, const json& j) { os << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------

struct MomentsArgs {
  std::string family = "F1", out;
  std::uint32_t pmin = 5, pmax = 199;
};

int run_moments(const MomentsArgs& a) {
  if (a.pmax < 5) throw InvalidInput("--pmax must be at least 5");
  const auto f = load_family(a.family);
  const auto table = moment_table(f, a.pmax, true);
  Sink sink(a.out);
  Csv csv(sink.stream());
  csv.row({"p", "A1", "A2", "closed_form_A1", "closed_form_A2", "match"});
  bool all = true;
  for (const auto& r : table.rows) {
    if (r.p < a.pmin) continue;
    const auto cf = closed_form(f.label, r.p);
    bool match = true;
    if (cf.A1 && *cf.A1 != r.A1) match = false;
    if (cf.A2 && *cf.A2 != r.A2) match = false;
    all = all && match;
    csv.row({std::to_string(r.p), std::to_string(r.A1), std::to_string(r.A2), cf.A1 ? std::to_string(*cf.A1) : "",
             cf.A2 ? std::to_string(*cf.A2) : "", match ? "true" : "false"});
  }
  return all ? 0 : 3;
}

struct RankArgs {
  std::string family = "F1", out;
  std::uint32_t X = 10000;
};

int run_rank(const RankArgs& a) {
  const auto f = load_family(a.family);
  const double est = nagao_estimate(f, a.X);
  const double theta = theta_ratio(a.X);
  json j;
  j["config"] = {{"subcommand", "rank"}, {"family", f.label}, {"X", a.X}};
  j["claimed_rank"] = f.rank;
  j["nagao_estimate"] = est;
  j["theta_ratio"] = theta;
  j["expected"] = f.rank * theta;
  j["gap"] = std::abs(est - f.rank * theta);
  const auto rs = is_rational_surface(f);
  j["rational_surface"] = {{"rational", rs.rational}, {"case", rs.which}, {"deg_A", rs.deg_A}, {"deg_B", rs.deg_B}};
  j["conjectures"] = conjecture_notes(f);
  Sink sink(a.out);
  dump(sink.stream(), j);
  return 0;
}

struct ConductorArgs {
  std::string family = "F1", range = "1:100", out;
  std::uint64_t budget = kDefaultFactorBudget;
};

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw InvalidInput("--t-range must be lo:hi");
  try {
    const auto lo = std::stoll(s.substr(0, colon));
    const auto hi = std::stoll(s.substr(colon + 1));
    if (hi < lo) throw InvalidInput("--t-range: hi < lo");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw InvalidInput("--t-range must be lo:hi with integers");
  }
}

/// True when D(t) has no square prime factor outside B.
bool is_good(const FamilyDef& f, const IntPoly& D, std::int64_t t, std::uint64_t budget) {
  const mpz_class v = D.eval(mpz_class(static_cast<long>(t)));
  if (v == 0) return false;
  const auto fac = factorize(v, budget);
  for (const auto& [p, e] : fac.prime_powers)
    if (e >= 2 && !(f.B != 0 && mpz_divisible_p(f.B.get_mpz_t(), p.get_mpz_t()))) return false;
  return true;
}

int run_conductor(const ConductorArgs& a) {
  const auto f = load_family(a.family);
  const auto inv = invariants(f);
  const auto [lo, hi] = parse_range(a.range);
  std::vector<std::int64_t> ts;
  for (auto t = lo; t <= hi; ++t)
    if (is_good(f, inv.D, t, a.budget)) ts.push_back(t);
  std::vector<ConductorResult> cs(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) { cs[i] = conductor(f, mpz_class(static_cast<long>(ts[i])), inv, a.budget); });
  Sink sink(a.out);
  Csv csv(sink.stream());
  csv.row({"t", "C", "expected", "match", "complete"});
  bool all = true;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::string expected, match;
    if (f.expected_conductor) {
      const mpz_class e = f.expected_conductor->eval(mpz_class(static_cast<long>(ts[i])));
      expected = e.get_str();
      match = e == cs[i].C ? "true" : "false";
      all = all && e == cs[i].C;
    }
    csv.row({std::to_string(ts[i]), cs[i].C.get_str(), expected, match, cs[i].complete ? "true" : "false"});
  }
  return all ? 0 : 3;
}

struct SieveArgs {
  std::string family = "F1", out, json_out;
  std::int64_t N = 10000;
  std::uint64_t d_max = 0;
  double l = 1.5;
};

int run_sieve(const SieveArgs& a) {
  if (a.N < 1) throw InvalidInput("--N must be positive");
  const auto f = load_family(a.family);
  const auto d_max = a.d_max ? a.d_max : default_d_max(a.N, a.l);
  const auto rep = enumerate_good(f, a.N, d_max, true);
  Sink sink(a.out);
  Csv csv(sink.stream());
  csv.row({"d", "nu"});
  for (const auto& [d, v] : rep.nu_table) csv.row({std::to_string(d), std::to_string(v)});
  json j;
  j["config"] = {{"subcommand", "sieve"}, {"family", f.label}, {"N", a.N}, {"d_max", d_max}};
  j["N"] = a.N;
  j["good"] = rep.good_t.size();
  j["density"] = rep.density();
  j["c_F_estimate"] = rep.c_F_estimate;
  j["excess"] = rep.t_set_excess;
  if (!a.json_out.empty()) {
    Sink js(a.json_out);
    dump(js.stream(), j);
  } else {
    dump(std::cerr, j);
  }
  return 0;
}

struct DensityArgs {
  std::string family = "F1", testfn = "fejer:0.3", testfn2, mode = "percurve", out, csv_out;
  std::int64_t N = 1000;
  std::uint32_t p_min = 5;
  std::uint64_t d_max = 0;
  bool sigma_check = false;
};

json density_config(const DensityArgs& a, const std::string& sub) {
  json c;
  c["subcommand"] = sub;
  c["family"] = a.family;
  c["N"] = a.N;
  c["testfn"] = a.testfn;
  if (!a.testfn2.empty()) c["testfn2"] = a.testfn2;
  c["mode"] = a.mode;
  c["p_min"] = a.p_min;
  c["d_max"] = a.d_max;
  c["sigma_check"] = a.sigma_check;
  return c;
}

DensityReport compute_density(const DensityArgs& a, const FamilyDef& f) {
  if (a.N < 1) throw InvalidInput("--N must be positive");
  const auto g = TestFn::parse(a.testfn);
  std::optional<TestFn> g2;
  if (!a.testfn2.empty()) g2 = TestFn::parse(a.testfn2);
  DensityOptions opt;
  opt.mode = parse_normalization(a.mode);
  opt.p_min = a.p_min;
  opt.d_max = a.d_max;
  auto rep = density(f, a.N, g, g2, opt);
  if (a.sigma_check && (!rep.admissible_d1 || (g2 && !rep.admissible_d2)))
    throw InvalidInput("test-function support is outside the admissible range for conductor degree " +
                       std::to_string(rep.conductor_degree));
  return rep;
}

void write_curve_csv(const std::string& path, const DensityReport& rep) {
  Sink sink(path);
  Csv csv(sink.stream());
  std::vector<std::string> head = {"t", "log_conductor", "L", "complete", "S1", "S2"};
  const bool two = rep.D2_emp.has_value();
  if (two) head.insert(head.end(), {"S1_g2", "S2_g2", "S1_prod", "S2_prod"});
  csv.row(head);
  for (const auto& c : rep.curves) {
    std::vector<std::string> r = {std::to_string(c.t), real(c.log_conductor), real(c.L), c.complete ? "true" : "false",
                                  real(c.s[0].S1), real(c.s[0].S2)};
    if (two) {
      for (std::size_t k = 1; k < 3; ++k) {
        r.push_back(real(c.s[k].S1));
        r.push_back(real(c.s[k].S2));
      }
    }
    csv.row(r);
  }
}

int run_density(const DensityArgs& a) {
  const auto f = load_family(a.family);
  const auto rep = compute_density(a, f);
  json j;
  j["config"] = density_config(a, "density");
  const json body = rep.to_json();
  for (const auto& [k, v] : body.items()) j[k] = v;
  j["conjectures"] = conjecture_notes(f);
  Sink sink(a.out);
  dump(sink.stream(), j);
  if (!a.csv_out.empty()) write_curve_csv(a.csv_out, rep);
  return 0;
}

struct PredictArgs {
  std::string testfn = "fejer:0.45", testfn2, out, kernel_csv;
  int rank = 0;
  double x_max = 4.0, step = 0.01;
};

int run_predict(const PredictArgs& a) {
  if (a.rank < 0) throw InvalidInput("--rank must be non-negative");
  const auto g = TestFn::parse(a.testfn);
  std::optional<TestFn> g2;
  if (!a.testfn2.empty()) g2 = TestFn::parse(a.testfn2);
  json j;
  j["config"] = {{"subcommand", "predict"}, {"testfn", a.testfn}, {"testfn2", a.testfn2}, {"rank", a.rank}};
  auto& rows = j["predictions"] = json::array();
  for (Group G : all_groups()) {
    json r;
    r["group"] = group_name(G);
    r["d1"] = predict_d1(G, g, a.rank);
    if (g2) {
      r["d2"] = predict_d2(G, g, *g2, a.rank);
      r["d2_nonfamily"] = predict_d2_nonfamily(G, g, *g2);
    }
    rows.push_back(r);
  }
  Sink sink(a.out);
  dump(sink.stream(), j);
  if (!a.kernel_csv.empty()) {
    if (!(a.step > 0) || !(a.x_max > 0)) throw InvalidInput("--step and --x-max must be positive");
    Sink ks(a.kernel_csv);
    Csv csv(ks.stream());
    std::vector<std::string> head = {"x"};
    for (Group G : all_groups()) head.push_back(std::string("W1_") + group_name(G));
    for (Group G : all_groups()) head.push_back(std::string("W1hat_ac_") + group_name(G));
    csv.row(head);
    const auto n = static_cast<long>(std::floor(a.x_max / a.step + 1e-9));
    for (long i = 0; i <= n; ++i) {
      const double x = i * a.step;
      std::vector<std::string> r = {real(x)};
      for (Group G : all_groups()) r.push_back(real(w1_ac(G, x)));
      for (Group G : all_groups()) r.push_back(real(w1_hat_ac(G, x)));
      csv.row(r);
    }
  }
  return 0;
}

struct VerifyArgs {
  std::string out;
  double sigma1 = 0.9, sigma2 = 0.45;
};

int run_verify(const VerifyArgs& a) {
  const auto f1 = TestFn::fejer(a.sigma1);
  const auto f2 = TestFn::fejer(a.sigma2);
  Sink sink(a.out);
  Csv csv(sink.stream());
  csv.row({"level", "group", "testfn", "residual", "tolerance", "pass"});
  bool all = true;
  for (Group G : all_groups()) {
    const double r = kernel_crosscheck(G, f1);
    const bool ok = r <= 1e-6;
    all = all && ok;
    csv.row({"1", group_name(G), f1.name(), real(r), "1e-06", ok ? "true" : "false"});
  }
  for (Group G : {Group::SOeven, Group::O, Group::SOodd, Group::U}) {
    const auto c = kernel_crosscheck(G, f2, f2);
    const bool ok = c.residual <= 1e-4;
    all = all && ok;
    csv.row({"2", group_name(G), f2.name() + "^2", real(c.residual), "0.0001", ok ? "true" : "false"});
  }
  return all ? 0 : 3;
}

struct ReportArgs {
  DensityArgs d;
  std::uint32_t X = 10000;
};

int run_report(const ReportArgs& a) {
  const auto f = load_family(a.d.family);
  json j;
  json cfg = density_config(a.d, "report");
  cfg["X"] = a.X;
  j["config"] = cfg;
  j["family"] = to_json(f);

  const auto inv = invariants(f);
  const auto rs = is_rational_surface(f);
  j["invariants"] = {{"disc", inv.disc.to_string()},
                     {"D", inv.D.to_string()},
                     {"conductor_degree", conductor_degree(f)},
                     {"rational_surface", rs.rational},
                     {"abc_flag", abc_flag(f)}};

  const double est = nagao_estimate(f, a.X);
  const double theta = theta_ratio(a.X);
  j["rank"] = {{"claimed", f.rank}, {"X", a.X}, {"nagao_estimate", est}, {"expected", f.rank * theta}};

  const auto rep = compute_density(a.d, f);
  j["density"] = rep.to_json();

  json best;
  double best_res = 0;
  for (const auto& g : rep.groups) {
    if (g.group == Group::Sp || g.group == Group::U) continue;
    const double r = std::abs(g.d2_residual ? *g.d2_residual : g.d1_residual);
    if (best.is_null() || r < best_res) {
      best = group_name(g.group);
      best_res = r;
    }
  }
  j["closest_orthogonal_group"] = best;
  j["conjectures"] = conjecture_notes(f);
  Sink sink(a.d.out);
  dump(sink.stream(), j);
  return 0;
}

void add_density_options(CLI::App* sub, DensityArgs& d) {
  sub->add_option("--family", d.family, "Preset name or family JSON path");
  sub->add_option("--N", d.N, "t runs over [N, 2N]");
  sub->add_option("--testfn", d.testfn, "fejer:σ, bump:σ or zero");
  sub->add_option("--testfn2", d.testfn2, "Second test function (2-level)");
  sub->add_option("--mode", d.mode, "percurve or avglog");
  sub->add_option("--p-min", d.p_min, "Smallest prime in the sums");
  sub->add_option("--d-max", d.d_max, "Sieve bound (0: (log N)^1.5)");
  sub->add_flag("--sigma-check", d.sigma_check, "Reject supports outside the admissible range");
  sub->add_option("--out", d.out, "JSON output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-lying zero statistics for one-parameter families of elliptic curves"};
  app.require_subcommand(1);

  MomentsArgs ma;
  auto* moments = app.add_subcommand("moments", "A1(p), A2(p) against the known closed forms (CSV)");
  moments->add_option("--family", ma.family);
  moments->add_option("--pmin", ma.pmin);
  moments->add_option("--pmax", ma.pmax);
  moments->add_option("--out", ma.out);

  RankArgs ra;
  auto* rank = app.add_subcommand("rank", "Nagao rank sum (JSON)");
  rank->add_option("--family", ra.family);
  rank->add_option("--X", ra.X);
  rank->add_option("--out", ra.out);

  ConductorArgs ca;
  auto* cond = app.add_subcommand("conductor", "Tate conductors over good t (CSV)");
  cond->add_option("--family", ca.family);
  cond->add_option("--t-range", ca.range, "lo:hi");
  cond->add_option("--budget", ca.budget, "Pollard–Brent iteration budget");
  cond->add_option("--out", ca.out);

  SieveArgs sa;
  auto* sieve = app.add_subcommand("sieve", "Square-free sieve: nu(d) CSV and summary JSON");
  sieve->add_option("--family", sa.family);
  sieve->add_option("--N", sa.N);
  sieve->add_option("--d-max", sa.d_max);
  sieve->add_option("--l", sa.l, "d_max = (log N)^l when --d-max is 0");
  sieve->add_option("--out", sa.out, "CSV path (default stdout)");
  sieve->add_option("--json", sa.json_out, "Summary JSON path (default stderr)");

  DensityArgs da;
  auto* dens = app.add_subcommand("density", "Empirical 1- and 2-level densities (JSON)");
  add_density_options(dens, da);
  dens->add_option("--csv", da.csv_out, "Per-t contributions CSV");

  PredictArgs pa;
  auto* pred = app.add_subcommand("predict", "Symmetry-group predictions (JSON)");
  pred->add_option("--testfn", pa.testfn);
  pred->add_option("--testfn2", pa.testfn2);
  pred->add_option("--rank", pa.rank);
  pred->add_option("--out", pa.out);
  pred->add_option("--kernel-csv", pa.kernel_csv, "Write W1(x) and the Fourier ac-part on a grid");
  pred->add_option("--x-max", pa.x_max);
  pred->add_option("--step", pa.step);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify-kernels", "Kernel quadrature against closed-form predictions (CSV)");
  verify->add_option("--sigma1", va.sigma1);
  verify->add_option("--sigma2", va.sigma2);
  verify->add_option("--out", va.out);

  ReportArgs rpa;
  auto* report = app.add_subcommand("report", "Full pipeline for one family (JSON)");
  add_density_options(report, rpa.d);
  report->add_option("--X", rpa.X, "Nagao sum bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*moments) return run_moments(ma);
    if (*rank) return run_rank(ra);
    if (*cond) return run_conductor(ca);
    if (*sieve) return run_sieve(sa);
    if (*dens) return run_density(da);
    if (*pred) return run_predict(pa);
    if (*verify) return run_verify(va);
    if (*report) return run_report(rpa);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
