#pragma once

#include <dybe/fusion.hpp>
#include <dybe/gauge.hpp>
#include <dybe/liealg.hpp>
#include <dybe/rmatrix.hpp>
#include <dybe/trace.hpp>
#include <dybe/verify.hpp>

#include <json.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace dybe::cli {

inline constexpr const char* version = "0.1.0";

using json = nlohmann::ordered_json;

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SuiteConfig {
  std::string suite;
  verify::Params params;
  int samples = 25;
  std::uint64_t seed = 42;
  std::optional<double> tol;
  std::string backend;  // empty: the suite's default
  bool timestamp = false;
  std::string json_path;
};

struct SuiteInfo {
  std::string name;
  std::string command;
  std::string description;
};

inline const std::vector<SuiteInfo>& catalogue() {
  static const std::vector<SuiteInfo> c{
      {"qdybe", "verify", "quantum dynamical Yang-Baxter equation for a named R-matrix family"},
      {"qdybe-spectral", "verify", "spectral quantum dynamical Yang-Baxter equation (elliptic and degenerate families)"},
      {"hecke", "verify", "Hecke condition (PR-1)(PR+q)=0 for the non-spectral families"},
      {"unitarity", "verify", "unitarity R(u)R^21(-u)=1 for the spectral families"},
      {"rll", "verify", "dynamical RLL relation with R itself as the representation"},
      {"cdybe", "classical", "classical dynamical Yang-Baxter equation, with or without spectral parameter"},
      {"coupling", "classical", "coupling constant r+r^21=eps*Omega (eps=0 rational, eps=1 trig)"},
      {"residue", "classical", "residue of the elliptic classical r-matrix at u=0 equals Omega"},
      {"gauge", "gauge", "gauge transformation from a JSON plan preserves the (classical) dynamical Yang-Baxter equation"},
      {"closed-form", "gauge", "closedness of a multiplicative 2-form (exact, product or cyclic)"},
      {"limit", "limits", "classical limit (1-R(lambda/h))/h -> r(lambda) with empirical order >= tol"},
      {"abrr", "fusion", "ABRR fixed-point equation for the fusion operator"},
      {"twist", "fusion", "dynamical twist (2-cocycle) equation for the fusion operator"},
      {"exchange", "fusion", "exchange operator satisfies QDYBE and matches the closed-form vector R-matrix"},
      {"cross-oracle", "fusion", "fusion operator from intertwiners equals the ABRR and universal solutions"},
      {"eigen", "trace", "Macdonald-type eigenvalue equation D_W F_V = chi_W F_V for trace functions"},
      {"commute", "trace", "commutativity of difference operators D_W and D_{W1 x W2} = D_W1 D_W2"},
      {"symmetry", "trace", "symmetry F_V(lambda,mu) = F_V(mu,lambda) of normalized trace functions"},
  };
  return c;
}

inline const SuiteInfo* find_suite(const std::string& name) {
  for (const auto& s : catalogue())
    if (s.name == name) return &s;
  return nullptr;
}

// Reads suite parameters, records the resolved value of every key read, and
// rejects keys nobody asked for.
class ParamReader {
 public:
  explicit ParamReader(const verify::Params& given) {
    for (const auto& [k, v] : given) {
      if (given_.count(k)) throw ConfigError("parameter '" + k + "' given twice");
      given_[k] = v;
    }
  }

  bool has(const std::string& key) const { return given_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& fallback) {
    auto it = given_.find(key);
    std::string v = it == given_.end() ? fallback : it->second;
    record(key, v);
    return v;
  }

  std::optional<std::string> optional(const std::string& key) {
    auto it = given_.find(key);
    if (it == given_.end()) return std::nullopt;
    record(key, it->second);
    return it->second;
  }

  int integer(const std::string& key, int fallback) {
    auto v = str(key, std::to_string(fallback));
    try {
      std::size_t pos = 0;
      int r = std::stoi(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return r;
    } catch (const std::exception&) {
      throw ConfigError("parameter '" + key + "': not an integer: " + v);
    }
  }

  double real(const std::string& key, const std::string& fallback) { return to_real(key, str(key, fallback)); }

  Rational rational(const std::string& key, const std::string& fallback) {
    auto v = str(key, fallback);
    try {
      return parse_rational(v);
    } catch (const std::exception&) {
      throw ConfigError("parameter '" + key + "': not a rational: " + v);
    }
  }

  std::vector<std::string> list(const std::string& key, const std::string& fallback) {
    auto v = str(key, fallback);
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) out.push_back(item);
    if (out.empty()) throw ConfigError("parameter '" + key + "': empty list");
    return out;
  }

  std::vector<double> reals(const std::string& key, const std::string& fallback) {
    std::vector<double> out;
    for (const auto& s : list(key, fallback)) out.push_back(to_real(key, s));
    return out;
  }

  void done() const {
    for (const auto& [k, v] : given_)
      if (!read_.count(k)) throw ConfigError("unknown parameter '" + k + "' for this suite");
  }

  const verify::Params& resolved() const { return resolved_; }

  static double to_real(const std::string& key, const std::string& v) {
    try {
      if (v.find('/') != std::string::npos) return static_cast<double>(parse_rational(v));
      std::size_t pos = 0;
      double r = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return r;
    } catch (const std::exception&) {
      throw ConfigError("parameter '" + key + "': not a number: " + v);
    }
  }

 private:
  void record(const std::string& key, const std::string& v) {
    if (read_.insert(key).second) resolved_.push_back({key, v});
  }

  std::map<std::string, std::string> given_;
  std::set<std::string> read_;
  verify::Params resolved_;
};

struct SuiteResult {
  SuiteConfig config;
  verify::ResidualReport report;
  std::string backend;
  int exit_code = 0;
};

namespace detail {

struct Run {
  const SuiteConfig& cfg;
  ParamReader p;
  std::string backend;

  double tol(double fallback) const { return cfg.tol.value_or(fallback); }
  void require_backend(std::initializer_list<const char*> allowed) const {
    for (const char* a : allowed)
      if (backend == a) return;
    throw ConfigError("suite '" + cfg.suite + "' does not support backend '" + backend + "'");
  }
};

inline int positive(ParamReader& p, const std::string& key, int fallback, int lo = 1) {
  int v = p.integer(key, fallback);
  if (v < lo) throw ConfigError("parameter '" + key + "' must be >= " + std::to_string(lo));
  return v;
}

// ---- quantum R-matrix families -------------------------------------------

struct QuantumFamily {
  std::string name;
  rmatrix::AlphaBetaTable<Complex> table;
  double tol = 1e-10;
  Complex hecke = 1.0;
};

inline QuantumFamily quantum_family(ParamReader& p, const std::string& fallback, bool for_hecke = false) {
  QuantumFamily f;
  f.name = p.str("family", fallback);
  int n = positive(p, "n", 2, 2);
  if (f.name == "rational") {
    f.table = rmatrix::basic_rational_table(n);
  } else if (f.name == "trig") {
    double q = p.real("q", "0.5");
    f.table = rmatrix::basic_trigonometric_table(n, Complex(q));
    f.hecke = q;
  } else if (f.name == "exchange") {
    double q = p.real("q", "0.5");
    // the Hecke form holds for the table without its global scalar, with parameter q^{-2}
    f.table = rmatrix::exchange_closed_form_table(n, Complex(q), !for_hecke);
    f.hecke = 1.0 / (q * q);
  } else if (f.name == "elliptic") {
    double tau = p.real("tau", "0.8");
    double gamma = p.real("gamma", "0.23");
    f.table = rmatrix::basic_elliptic_table(n, specfun::EllipticParams(Complex(0.0, tau)), gamma);
    f.tol = 1e-8;
  } else if (f.name == "spectral-trig" || f.name == "spectral-rational") {
    double gamma = p.real("gamma", "0.23");
    auto kind = f.name == "spectral-trig" ? specfun::WaveKind::trig : specfun::WaveKind::rational;
    f.table = rmatrix::spectral_degenerate_table(kind, n, gamma);
  } else {
    throw ConfigError("unknown family '" + f.name + "' (rational|trig|elliptic|spectral-trig|spectral-rational|exchange)");
  }
  return f;
}

inline Point<Rational> random_rational_point(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> num(-60, 60);
  Point<Rational> l;
  for (int a = 0; a < n; ++a) l.push_back(Rational(num(rng), 13 + 2 * a));
  return l;
}

inline verify::ResidualReport run_qdybe(Run& r, bool spectral_only) {
  auto f = quantum_family(r.p, spectral_only ? "elliptic" : "rational");
  if (spectral_only && !f.table.spectral) throw ConfigError("qdybe-spectral needs a spectral family");
  if (r.backend == "exact") {
    if (f.name != "rational") throw ConfigError("the exact backend supports family=rational only");
    auto R = rmatrix::basic_rational<Rational>(f.table.n);
    std::mt19937_64 rng(r.cfg.seed);
    std::vector<Point<Rational>> pts;
    for (int s = 0; s < r.cfg.samples; ++s) pts.push_back(random_rational_point(rng, f.table.n));
    auto rep = verify::qdybe_residual_at(R, Rational(1), pts, r.tol(0.0));
    rep.seed = r.cfg.seed;
    return rep;
  }
  r.require_backend({"float"});
  if (f.table.spectral)
    return verify::qdybe_spectral_residual(rmatrix::assemble_spectral(f.table), f.table.step, r.cfg.samples,
                                           r.cfg.seed, r.tol(f.tol));
  return verify::qdybe_residual(rmatrix::assemble(f.table), f.table.step, r.cfg.samples, r.cfg.seed, r.tol(f.tol));
}

inline verify::ResidualReport run_hecke(Run& r) {
  r.require_backend({"float"});
  auto f = quantum_family(r.p, "rational", true);
  if (f.table.spectral) throw ConfigError("hecke needs a non-spectral family (rational|trig|exchange)");
  auto h = r.p.optional("hecke");
  Complex param = h ? Complex(ParamReader::to_real("hecke", *h)) : f.hecke;
  return verify::hecke_check(rmatrix::assemble(f.table), param, r.cfg.samples, r.cfg.seed, r.tol(1e-9));
}

inline verify::ResidualReport run_unitarity(Run& r) {
  r.require_backend({"float"});
  auto f = quantum_family(r.p, "elliptic");
  if (!f.table.spectral) throw ConfigError("unitarity needs a spectral family");
  return verify::unitarity_check(rmatrix::assemble_spectral(f.table), r.cfg.samples, r.cfg.seed, r.tol(1e-8));
}

inline verify::ResidualReport run_rll(Run& r) {
  r.require_backend({"float"});
  auto f = quantum_family(r.p, "elliptic");
  auto R = f.table.spectral ? rmatrix::assemble_spectral(f.table) : verify::constant_in_u(rmatrix::assemble(f.table));
  return verify::rll_residual(R, R, f.table.step, r.cfg.samples, r.cfg.seed, r.tol(1e-8));
}

// ---- classical families ---------------------------------------------------

inline liealg::ClassicalDynOperator classical_family(ParamReader& p, const std::string& fallback, std::string* name = nullptr) {
  auto fam = p.str("family", fallback);
  if (name) *name = fam;
  int n = positive(p, "n", 2, 2);
  if (fam == "c-rational") return liealg::classical_rational(n);
  if (fam == "c-trig") return liealg::classical_trig(n);
  if (fam == "c-elliptic") {
    double tau = p.real("tau", "0.8");
    return liealg::classical_elliptic(n, specfun::EllipticParams(Complex(0.0, tau)));
  }
  throw ConfigError("unknown classical family '" + fam + "' (c-rational|c-trig|c-elliptic)");
}

inline verify::ResidualReport run_cdybe(Run& r) {
  r.require_backend({"float"});
  auto cr = classical_family(r.p, "c-rational");
  return liealg::cdybe_residual(cr, r.cfg.samples, r.cfg.seed, r.tol(cr.spectral ? 1e-6 : 1e-7));
}

inline verify::ResidualReport run_coupling(Run& r) {
  r.require_backend({"float"});
  std::string fam;
  auto cr = classical_family(r.p, "c-rational", &fam);
  liealg::CouplingCertificate c;
  double expected = 0.0;
  if (cr.spectral) {
    double u = r.p.real("u", "0.31");
    c = liealg::spectral_coupling_constant(cr, u, r.cfg.samples, r.cfg.seed);
  } else {
    expected = fam == "c-trig" ? 1.0 : 0.0;
    c = liealg::coupling_constant(cr, r.cfg.samples, r.cfg.seed);
  }
  expected = r.p.real("epsilon", std::to_string(static_cast<int>(expected)));
  auto rep = verify::make_report("coupling", r.cfg.seed, r.tol(1e-10));
  rep.add(c.defect);
  rep.add(std::abs(c.epsilon - expected));
  verify::finish(rep);
  return rep;
}

inline verify::ResidualReport run_residue(Run& r) {
  r.require_backend({"float"});
  auto cr = classical_family(r.p, "c-elliptic");
  if (!cr.spectral) throw ConfigError("residue needs the spectral family c-elliptic");
  LambdaSampler sampler(cr.n, r.cfg.seed, cr.poles, {}, SampleBox{}, 5e-2);
  auto rep = verify::make_report("residue", r.cfg.seed, r.tol(1e-5));
  for (int s = 0; s < r.cfg.samples; ++s) rep.add(liealg::residue_at_zero(cr, to_point<Complex>(sampler.next())).error);
  verify::finish(rep);
  return rep;
}

// ---- gauge ----------------------------------------------------------------

inline json load_plan(const std::string& text) {
  std::string body = text;
  if (body.empty() || body.front() != '{') {
    std::ifstream in(text);
    if (!in) throw ConfigError("cannot read gauge plan '" + text + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("gauge plan: ") + e.what());
  }
}

inline Matrix<Complex> json_matrix(const json& j, std::size_t rows, std::size_t cols, const std::string& what) {
  if (!j.is_array() || j.size() != rows) throw ConfigError("gauge plan: '" + what + "' must be a " + std::to_string(rows) + "-row matrix");
  Matrix<Complex> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw ConfigError("gauge plan: '" + what + "' has a row of wrong length");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

inline std::vector<Complex> json_vector(const json& j, std::size_t n, const std::string& what) {
  if (!j.is_array() || j.size() != n) throw ConfigError("gauge plan: '" + what + "' must have " + std::to_string(n) + " entries");
  std::vector<Complex> v;
  for (const auto& x : j) v.push_back(x.get<double>());
  return v;
}

// ξ_a(λ) = exp(λ_a Σ_b C_ab λ_b)
inline std::vector<gauge::ScalarField> quadratic_potential(const Matrix<Complex>& C) {
  std::vector<gauge::ScalarField> xi;
  for (std::size_t a = 0; a < C.rows(); ++a)
    xi.push_back([C, a](const Point<Complex>& l) {
      Complex s = 0.0;
      for (std::size_t b = 0; b < C.cols(); ++b) s += C(a, b) * l[b];
      return std::exp(l[a] * s);
    });
  return xi;
}

inline gauge::MultiplicativeTwoForm named_form(const std::string& kind, int n) {
  if (kind == "product")
    return {n, [](int a, int b, const Point<Complex>& l) {
              Complex e = std::exp(l[a] * l[b]);
              return a < b ? e : 1.0 / e;
            }};
  if (kind == "cyclic") {
    if (n != 3) throw ConfigError("the cyclic form is defined for n=3");
    return {3, [](int a, int b, const Point<Complex>& l) {
              Complex e = std::exp(0.5 * l[3 - a - b]);
              return b == (a + 1) % 3 ? e : 1.0 / e;
            }};
  }
  throw ConfigError("unknown form '" + kind + "' (potential matrix|product|cyclic)");
}

inline gauge::MultiplicativeTwoForm plan_form(const json& j, int n, Complex gamma) {
  if (j.is_string()) return named_form(j.get<std::string>(), n);
  if (j.is_object() && j.contains("potential"))
    return gauge::exact_from_potential(quadratic_potential(json_matrix(j["potential"], n, n, "potential")), gamma);
  throw ConfigError("gauge plan: 'form' must be \"product\", \"cyclic\" or {\"potential\": matrix}");
}

// ψ(λ) = ½λᵀAλ + bᵀλ
inline gauge::Potential quadratic_psi(const json& j, int n) {
  Matrix<Complex> A(n, n);
  std::vector<Complex> b(n, 0.0);
  if (j.contains("quadratic")) A = json_matrix(j["quadratic"], n, n, "psi.quadratic");
  if (j.contains("linear")) b = json_vector(j["linear"], n, "psi.linear");
  Matrix<Complex> H = A + A.transpose();
  H = Complex(0.5) * H;
  gauge::Potential psi;
  psi.value = [A, b, n](const Point<Complex>& l) {
    Complex s = 0.0;
    for (int i = 0; i < n; ++i) {
      s += b[i] * l[i];
      for (int k = 0; k < n; ++k) s += 0.5 * A(i, k) * l[i] * l[k];
    }
    return s;
  };
  psi.gradient = [H, b, n](const Point<Complex>& l) {
    std::vector<Complex> g(b);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) g[i] += H(i, k) * l[k];
    return g;
  };
  psi.hessian = [H](const Point<Complex>&) { return H; };
  return psi;
}

inline std::vector<int> plan_permutation(const json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) throw ConfigError("gauge plan: 'permutation' must have n entries");
  std::vector<int> s;
  for (const auto& x : j) s.push_back(x.get<int>());
  return s;
}

inline verify::ResidualReport run_gauge(Run& r) {
  r.require_backend({"float"});
  auto text = r.p.optional("plan");
  if (!text) throw ConfigError("gauge needs a plan (--plan <file.json> or inline JSON)");
  json plan = load_plan(*text);
  r.p.str("plan_contents", plan.dump());
  static const std::set<std::string> known{"family", "n", "q", "gamma", "tau", "form", "permutation", "shift",
                                           "scalar", "psi", "reading", "u_scale", "two_form", "scale"};
  for (const auto& [k, v] : plan.items())
    if (!known.count(k)) throw ConfigError("gauge plan: unknown field '" + k + "'");
  // plan fields become suite parameters so the report echoes them
  verify::Params fp;
  for (const char* k : {"family", "n", "q", "gamma", "tau"})
    if (plan.contains(k)) fp.push_back({k, plan[k].is_string() ? plan[k].get<std::string>() : plan[k].dump()});
  ParamReader fr(fp);
  auto fam = fr.str("family", "rational");
  if (fam.rfind("c-", 0) == 0) {
    auto cr = classical_family(fr, fam);
    int n = cr.n;
    gauge::ClassicalGaugePlan cp;
    if (plan.contains("two_form")) {
      auto C = json_matrix(plan["two_form"], n - 1, n - 1, "two_form");
      cp.two_form = [C](const Point<Complex>&) { return C; };
    }
    if (plan.contains("scale")) cp.scale = plan["scale"].get<double>();
    if (plan.contains("shift")) cp.shift = json_vector(plan["shift"], n, "shift");
    if (plan.contains("permutation")) cp.weyl = plan_permutation(plan["permutation"], n);
    if (plan.contains("u_scale")) cp.u_scale = plan["u_scale"].get<double>();
    if (plan.contains("psi")) cp.psi = quadratic_psi(plan["psi"], n);
    for (const char* k : {"form", "scalar", "reading"})
      if (plan.contains(k)) throw ConfigError(std::string("gauge plan: '") + k + "' applies to quantum families only");
    fr.done();
    auto g = gauge::apply_classical(cr, cp);
    auto rep = liealg::cdybe_residual(g, r.cfg.samples, r.cfg.seed, r.tol(cr.spectral ? 1e-6 : 1e-7));
    rep.identity = "gauge";
    return rep;
  }
  auto f = quantum_family(fr, fam);
  int n = f.table.n;
  gauge::QuantumGaugePlan qp;
  if (plan.contains("form")) qp.form = plan_form(plan["form"], n, f.table.step);
  if (plan.contains("permutation")) qp.permutation = plan_permutation(plan["permutation"], n);
  if (plan.contains("shift")) qp.shift = json_vector(plan["shift"], n, "shift");
  if (plan.contains("scalar")) {
    Complex c = plan["scalar"].get<double>();
    qp.scalar = [c](const Complex&) { return c; };
  }
  if (plan.contains("psi")) qp.psi = quadratic_psi(plan["psi"], n).value;
  if (plan.contains("reading")) {
    auto s = plan["reading"].get<std::string>();
    if (s == "printed") qp.reading = gauge::Type3Reading::printed;
    else if (s != "corrected") throw ConfigError("gauge plan: reading must be printed|corrected");
  }
  if (plan.contains("u_scale")) qp.u_scale = plan["u_scale"].get<double>();
  for (const char* k : {"two_form", "scale"})
    if (plan.contains(k)) throw ConfigError(std::string("gauge plan: '") + k + "' applies to classical families only");
  fr.done();
  auto t = gauge::apply_quantum(f.table, qp, f.table.step);
  verify::ResidualReport rep;
  if (t.spectral)
    rep = verify::qdybe_spectral_residual(rmatrix::assemble_spectral(t), t.step, r.cfg.samples, r.cfg.seed, r.tol(1e-8));
  else
    rep = verify::qdybe_residual(rmatrix::assemble(t), t.step, r.cfg.samples, r.cfg.seed, r.tol(1e-9));
  rep.identity = "gauge";
  return rep;
}

inline verify::ResidualReport run_closed_form(Run& r) {
  r.require_backend({"float"});
  auto kind = r.p.str("form", "potential");
  int n = positive(r.p, "n", 3, 2);
  gauge::MultiplicativeTwoForm f;
  if (kind == "potential") {
    std::mt19937_64 rng(r.cfg.seed);
    std::uniform_real_distribution<double> d(-0.5, 0.5);
    Matrix<Complex> C(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) C(a, b) = d(rng);
    f = gauge::exact_from_potential(quadratic_potential(C), 1.0);
  } else {
    f = named_form(kind, n);
  }
  return gauge::is_closed(f, 1.0, r.cfg.samples, r.cfg.seed, r.tol(1e-12));
}

// ---- classical limits -----------------------------------------------------

inline verify::ResidualReport run_limit(Run& r) {
  r.require_backend({"float"});
  auto fam = r.p.str("family", "rational");
  liealg::LimitFamily lf;
  if (fam == "rational") lf = liealg::LimitFamily::rational;
  else if (fam == "trig") lf = liealg::LimitFamily::trig;
  else if (fam == "trig-printed") lf = liealg::LimitFamily::trig_printed;
  else if (fam == "elliptic") lf = liealg::LimitFamily::elliptic;
  else throw ConfigError("unknown limit family '" + fam + "' (rational|trig|trig-printed|elliptic)");
  int n = positive(r.p, "n", 2, 2);
  auto lam = r.p.reals("lambda", n == 2 ? "1.3,-0.4" : "1.3,-0.4,0.55");
  if (static_cast<int>(lam.size()) != n) throw ConfigError("limit: lambda must have n coordinates");
  auto hb = r.p.reals("hbar", "0.01,0.005,0.0025");
  Point<Complex> l(lam.begin(), lam.end());
  specfun::EllipticParams ep;
  Complex u(0.37, 0.05);
  if (lf == liealg::LimitFamily::elliptic) {
    ep = specfun::EllipticParams(Complex(0.0, r.p.real("tau", "0.8")));
    u = Complex(r.p.real("u", "0.37"), r.p.real("u_im", "0.05"));
  }
  auto res = liealg::classical_limit(lf, n, l, hb, u, ep);
  double min_order = r.tol(0.9);
  auto rep = verify::make_report("limit", r.cfg.seed, min_order);
  for (double e : res.errors) rep.add(e);
  std::ostringstream o;
  o << std::setprecision(6) << res.order;
  r.p.str("measured_order", res.exact ? "exact" : o.str());
  rep.pass = res.converged(min_order);
  return rep;
}

// ---- fusion ----------------------------------------------------------------

template <class S>
std::vector<S> fusion_points(ParamReader& p, bool classical, const fusion::RankOneAlgebra<S>& alg) {
  // classical: l; quantum: X = q^{2l}
  std::vector<std::string> raw = p.list("lambda", classical ? "3/7,-5/11,13/5,2/9,-7/3" : "3,5/7,-2,7/11,13/3");
  std::vector<S> out;
  for (const auto& s : raw) {
    Rational v;
    try {
      v = parse_rational(s);
    } catch (const std::exception&) {
      throw ConfigError("lambda: not a rational: " + s);
    }
    if constexpr (std::is_same_v<S, Rational>) out.push_back(v);
    else out.push_back(S(static_cast<double>(v)));
  }
  (void)alg;
  return out;
}

template <class S>
verify::ResidualReport run_fusion_check(Run& r, const fusion::RankOneAlgebra<S>& alg, const std::vector<int>& mods,
                                        const std::string& check) {
  using fusion::fd_module;
  auto pts = fusion_points(r.p, alg.classical, alg);
  double tol = r.tol(std::is_same_v<S, Rational> ? 0.0 : 1e-9);
  auto rep = verify::make_report(check, r.cfg.seed, tol);
  auto W = fd_module(alg, mods[0]), V = fd_module(alg, mods[1]);
  if (check == "abrr") {
    for (const auto& z : pts) rep.add(fusion::abrr_defect(alg, W, V, z, fusion::abrr_solve(alg, W, V, z)).sup_norm());
  } else if (check == "twist") {
    if (mods.size() != 3) throw ConfigError("twist needs three modules");
    auto U = fd_module(alg, mods[2]);
    for (const auto& z : pts) rep.add(fusion::twist_defect(alg, W, V, U, z).sup_norm());
  } else if (check == "cross-oracle") {
    for (const auto& z : pts) {
      auto a = fusion::abrr_solve(alg, W, V, z);
      rep.add((fusion::fusion_via_intertwiners(alg, W, V, z) - a).sup_norm());
      rep.add((fusion::universal_J(alg, z).eval(W, V) - a).sup_norm());
      if (alg.classical) rep.add((fusion::closed_form_J(z).eval(W, V) - a).sup_norm());
    }
  } else if (check == "exchange") {
    auto op = fusion::exchange_operator(alg, W);
    for (const auto& z : pts) rep.add(verify::qdybe_defect(op, Point<S>{z}, ScalarTraits<S>::one()).sup_norm());
    // closed-form comparison for the vector representation: l = λ1 − λ2
    if (mods[0] == 1) {
      if (alg.classical) {
        for (const auto& z : pts) {
          auto C = rmatrix::exchange_closed_form<S>(2, ScalarTraits<S>::one()).eval(Point<S>{z, ScalarTraits<S>::zero()});
          rep.add((fusion::exchange(alg, W, W, z).matrix - C).sup_norm());
        }
        r.p.str("closed_form", "compared");
      } else if constexpr (!std::is_same_v<S, Rational>) {
        double lq = std::log(alg.q.real());
        for (const auto& z : pts) {
          if (z.real() <= 0) continue;
          S l(std::log(z.real()) / (2 * lq));
          auto C = rmatrix::exchange_closed_form<S>(2, alg.q).eval(Point<S>{l, S(0.0)});
          auto R = fusion::exchange(alg, W, W, z);
          rep.add((std::sqrt(alg.q) * R.matrix - C).sup_norm());
        }
        r.p.str("closed_form", "compared at X > 0");
      } else {
        r.p.str("closed_form", "not compared (exact quantum points are X values)");
      }
    }
  } else {
    throw ConfigError("unknown fusion check '" + check + "' (abrr|twist|exchange|cross-oracle)");
  }
  verify::finish(rep);
  return rep;
}

inline verify::ResidualReport run_fusion(Run& r, const std::string& check) {
  r.require_backend({"exact", "float"});
  std::vector<int> mods;
  for (const auto& s : r.p.list("modules", check == "twist" ? "1,1,1" : "1,1")) {
    try {
      mods.push_back(std::stoi(s));
    } catch (const std::exception&) {
      throw ConfigError("modules: not an integer: " + s);
    }
    if (mods.back() < 0) throw ConfigError("modules: highest weights must be >= 0");
  }
  if (mods.size() < 2 || mods.size() > 3) throw ConfigError("modules: give two or three highest weights");
  auto qs = r.p.str("q", "1/2");
  if (r.backend == "exact") {
    auto alg = qs == "classical" ? fusion::RankOneAlgebra<Rational>::classical_case()
                                 : fusion::RankOneAlgebra<Rational>::quantum(r.p.rational("q", "1/2"));
    return run_fusion_check(r, alg, mods, check);
  }
  auto alg = qs == "classical" ? fusion::RankOneAlgebra<Complex>::classical_case()
                               : fusion::RankOneAlgebra<Complex>::quantum(Complex(r.p.real("q", "1/2")));
  return run_fusion_check(r, alg, mods, check);
}

// ---- trace -----------------------------------------------------------------

inline int even_module(ParamReader& p) {
  int v = positive(p, "V", 2, 0);
  if (v % 2) throw ConfigError("V must be an even highest weight 2k (zero weight space needed)");
  return v;
}

inline verify::ResidualReport run_eigen(Run& r) {
  r.require_backend({"exact"});
  int v = even_module(r.p);
  int w = positive(r.p, "W", 1, 0);
  auto q = r.p.rational("q", "1/2");
  int N = positive(r.p, "order", 10, 2);
  std::vector<Rational> mus;
  for (const auto& s : r.p.list("mu", "3/5,7/4,2/9")) mus.push_back(parse_rational(s));
  auto rep = trace::eigen_check(q, v, w, mus, N, r.tol(0.0));
  rep.params.clear();
  return rep;
}

inline verify::ResidualReport run_commute(Run& r) {
  r.require_backend({"exact"});
  int v = even_module(r.p);
  int w1 = positive(r.p, "W", 1, 0);
  int w2 = positive(r.p, "W2", 2, 0);
  auto q = r.p.rational("q", "1/2");
  int N = positive(r.p, "order", 10, 2);
  auto rep = verify::make_report("commute", r.cfg.seed, r.tol(0.0));
  rep.add(trace::commutator_defect(trace::macdonald_op(q, w1, v, N), trace::macdonald_op(q, w2, v, N), N));
  rep.add(trace::tensor_product_defect(q, w1, w2, v, N));
  verify::finish(rep);
  return rep;
}

inline verify::ResidualReport run_symmetry(Run& r) {
  r.require_backend({"float"});
  int v = even_module(r.p);
  double q = r.p.real("q", "1/2");
  int N = positive(r.p, "order", 12, 1);
  auto rep = trace::symmetry_check(q, v, r.cfg.samples, N, r.tol(1e-6), r.cfg.seed);
  for (const auto& [k, val] : rep.params)
    if (k == "tail_bound") r.p.str("tail_bound", val);
  rep.params.clear();
  return rep;
}

inline std::string default_backend(const std::string& suite) {
  static const std::set<std::string> exact{"abrr", "twist", "exchange", "cross-oracle", "eigen", "commute"};
  return exact.count(suite) ? "exact" : "float";
}

}  // namespace detail

inline SuiteResult run_suite(const SuiteConfig& cfg) {
  if (!find_suite(cfg.suite)) throw ConfigError("unknown suite '" + cfg.suite + "'");
  if (cfg.samples < 1) throw ConfigError("samples must be >= 1");
  if (cfg.tol && !(*cfg.tol >= 0)) throw ConfigError("tol must be >= 0");
  detail::Run r{cfg, ParamReader(cfg.params), cfg.backend.empty() ? detail::default_backend(cfg.suite) : cfg.backend};
  if (r.backend != "float" && r.backend != "exact") throw ConfigError("backend must be float or exact");
  const auto& s = cfg.suite;
  verify::ResidualReport rep;
  if (s == "qdybe") rep = detail::run_qdybe(r, false);
  else if (s == "qdybe-spectral") rep = detail::run_qdybe(r, true);
  else if (s == "hecke") rep = detail::run_hecke(r);
  else if (s == "unitarity") rep = detail::run_unitarity(r);
  else if (s == "rll") rep = detail::run_rll(r);
  else if (s == "cdybe") rep = detail::run_cdybe(r);
  else if (s == "coupling") rep = detail::run_coupling(r);
  else if (s == "residue") rep = detail::run_residue(r);
  else if (s == "gauge") rep = detail::run_gauge(r);
  else if (s == "closed-form") rep = detail::run_closed_form(r);
  else if (s == "limit") rep = detail::run_limit(r);
  else if (s == "eigen") rep = detail::run_eigen(r);
  else if (s == "commute") rep = detail::run_commute(r);
  else if (s == "symmetry") rep = detail::run_symmetry(r);
  else rep = detail::run_fusion(r, s);
  r.p.done();
  rep.params = r.p.resolved();
  SuiteResult out{cfg, rep, r.backend, rep.pass ? 0 : 1};
  return out;
}

inline json to_json(const SuiteResult& res) {
  json params = json::object();
  for (const auto& [k, v] : res.report.params) params[k] = v;
  json j;
  j["suite"] = res.config.suite;
  j["params"] = params;
  j["samples"] = res.report.samples;
  j["seed"] = res.config.seed;
  j["residual_max"] = res.report.residual_max;
  j["residual_mean"] = res.report.residual_mean;
  j["tol"] = res.report.tol;
  j["pass"] = res.report.pass;
  j["backend"] = res.backend;
  j["version"] = version;
  if (res.config.timestamp) {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream o;
    o << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    j["meta"] = {{"timestamp", o.str()}};
  }
  return j;
}

inline void write_json(const SuiteResult& res, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << to_json(res).dump(2) << "\n";
}

inline std::string summary_line(const SuiteResult& res) {
  std::ostringstream o;
  o << (res.report.pass ? "PASS " : "FAIL ") << res.config.suite << " residual_max=" << std::setprecision(6)
    << res.report.residual_max << " tol=" << res.report.tol << " samples=" << res.report.samples
    << " backend=" << res.backend;
  return o.str();
}

}  // namespace dybe::cli
