#include "thermofid/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <string>

#include "thermofid/errors.hpp"
#include "thermofid/models.hpp"
#include "thermofid/oracle.hpp"

namespace thermofid::validation {
namespace {

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

CheckResult finish(CheckResult r, double worst, double tol) {
  r.passed = std::all_of(r.samples.begin(), r.samples.end(),
                         [](const Sample& s) { return s.measured <= s.bound; });
  r.detail = fmt("worst %.3e against tolerance %.3e", worst, tol);
  return r;
}

// Transverse chain with a longitudinal field, 8-dim, H(lambda) = H0 + lambda V.
oracle::DenseModel spin_model() {
  const int n = 3;
  const oracle::Matrix h0 = oracle::transverse_ising_chain(n, 1.0, 0.0, 0.3).matrix();
  oracle::Matrix v = oracle::Matrix::Zero(h0.rows(), h0.cols());
  for (int i = 0; i < n; ++i) v -= oracle::site_operator('x', i, n);
  return oracle::DenseModel(h0, v);
}

quadrature::Options tight() {
  quadrature::Options q;
  q.abs_tol = 1e-13;
  return q;
}

CheckResult check_fidelity_beta_exact(const ValidationKernels& k,
                                      const ValidationOptions& opt) {
  CheckResult r{"fidelity_beta_exact", false, "", {}};
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<int> dim(2, std::max(2, opt.max_dimension));
  std::uniform_real_distribution<double> beta(0.1, 3.0);
  const double tol = 1e-10;
  double worst = 0.0;
  for (int i = 0; i < opt.random_hamiltonians; ++i) {
    const int d = dim(rng);
    const oracle::Matrix h = oracle::random_hermitian(d, rng);
    const double b0 = beta(rng);
    const double b1 = beta(rng);
    const oracle::DenseHamiltonian dh(h);
    const double exact = oracle::uhlmann_fidelity(oracle::gibbs_state(dh, b0),
                                                  oracle::gibbs_state(dh, b1));
    const oracle::DenseModel model(h, oracle::Matrix::Zero(d, d));
    const double err = std::abs(exact - k.fidelity_beta(model, b0, b1, 0.0));
    worst = std::max(worst, err);
    r.samples.push_back({"dim=" + std::to_string(d) + fmt(" b0=%.4f b1=%.4f", b0, b1), err, tol});
  }
  return finish(std::move(r), worst, tol);
}

CheckResult check_cv_vs_fidelity(const ValidationKernels& k) {
  CheckResult r{"cv_vs_fidelity", false, "", {}};
  const models::Tim1DModel tim({1.0, 1.0}, tight());
  const models::TwoLevelModel two;
  const double tol = 1e-2;
  double worst = 0.0;
  for (const ThermoModel* m : {static_cast<const ThermoModel*>(&tim),
                               static_cast<const ThermoModel*>(&two)}) {
    for (double t : {0.2, 0.5, 1.0, 2.0}) {
      const double dt = default_delta_t(t);
      const double b = 1.0 / t;
      const double cv = k.specific_heat(*m, ThermoPoint::at_temperature(t, 1.0), dt);
      const double f = k.fidelity_beta(*m, b, 1.0 / (t + dt), 1.0);
      const double pred = fidelity_from_specific_heat(cv, b, delta_beta(t, dt));
      const double err = std::abs(std::log(f) - std::log(pred)) / std::abs(std::log(pred));
      worst = std::max(worst, err);
      r.samples.push_back({m->name() + fmt(" T=%.2f", t), err, tol});
    }
  }
  return finish(std::move(r), worst, tol);
}

CheckResult check_chi_beta_vs_cv(const ValidationKernels& k) {
  CheckResult r{"chi_beta_vs_cv", false, "", {}};
  const models::Tim1DModel tim({1.0, 1.0}, tight());
  const double tol = 1e-2;
  double worst = 0.0;
  for (int i = 1; i <= 10; ++i) {
    const double t = 0.2 * i;
    const ThermoPoint p = ThermoPoint::at_temperature(t, 1.0);
    const double dt = default_delta_t(t);
    const double cv = k.specific_heat(tim, p, dt);
    const double chib = k.chi_beta(tim, p, dt);
    const double err = std::abs(4.0 * p.beta * p.beta * chib - cv) / cv;
    worst = std::max(worst, err);
    r.samples.push_back({fmt("tim1d T=%.2f", t), err, tol});
  }
  return finish(std::move(r), worst, tol);
}

CheckResult check_chi_lambda_vs_chi(const ValidationKernels& k) {
  CheckResult r{"chi_lambda_vs_chi", false, "", {}};
  const models::Tim1DModel tim({1.0, 1.0}, tight());
  const oracle::DenseModel dense = spin_model();
  const double tol = 1e-6;
  double worst = 0.0;
  for (const ThermoModel* m : {static_cast<const ThermoModel*>(&tim),
                               static_cast<const ThermoModel*>(&dense)}) {
    for (double t : {0.3, 1.0}) {
      for (double l : {0.5, 1.5}) {
        const ThermoPoint p = ThermoPoint::at_temperature(t, l);
        const double dl = 1e-2;
        const double chi = k.chi(*m, p, dl);
        const double chil = k.chi_lambda(*m, p.beta, l, dl);
        const double ref = p.beta * chi / 4.0;
        const double err = std::abs(chil - ref) / std::max(std::abs(ref), 1e-300);
        worst = std::max(worst, err);
        r.samples.push_back({m->name() + fmt(" T=%.2f lambda=%.2f", t, l), err, tol});
      }
    }
  }
  return finish(std::move(r), worst, tol);
}

CheckResult check_fidelity_lambda_bound(const ValidationKernels& k) {
  CheckResult r{"fidelity_lambda_bound", false, "", {}};
  const oracle::DenseModel model = spin_model();
  double worst_ratio = 0.0;
  for (double beta : {0.2, 0.5, 1.0}) {
    for (double l : {0.5, 1.0}) {
      for (double dl : {0.2, 0.1, 0.05}) {
        const double l0 = l - 0.5 * dl;
        const double l1 = l + 0.5 * dl;
        const auto h0 = model.hamiltonian(l0);
        const auto h1 = model.hamiltonian(l1);
        const double exact = oracle::fidelity_lambda_exact(h0, h1, beta);
        const double err = std::abs(exact - k.fidelity_lambda(model, beta, l0, l1));
        // Slack for rounding noise in the exact fidelity.
        const double bound = oracle::trotter_bound(h0, h1, beta) + 1e-12;
        worst_ratio = std::max(worst_ratio, err / bound);
        r.samples.push_back({fmt("beta=%.2f lambda=%.2f dlambda=%.3f", beta, l, dl), err, bound});
      }
    }
  }
  r.passed = std::all_of(r.samples.begin(), r.samples.end(),
                         [](const Sample& s) { return s.measured <= s.bound; });
  r.detail = fmt("worst |exact - approx| / bound = %.3e", worst_ratio);
  return r;
}

CheckResult check_ground_state_limit() {
  CheckResult r{"ground_state_limit", false, "", {}};
  const oracle::DenseModel model = spin_model();
  const double beta = 200.0;
  const double tol = 1e-6;
  double worst = 0.0;
  for (double l : {0.3, 0.5, 1.0}) {
    for (double dl : {0.1, 0.01}) {
      const auto h0 = model.hamiltonian(l);
      const auto h1 = model.hamiltonian(l + dl);
      const double f = oracle::fidelity_lambda_exact(h0, h1, beta);
      const double overlap = oracle::ground_state_overlap(h0, h1);
      const double err = std::abs(f - overlap);
      worst = std::max(worst, err);
      r.samples.push_back({fmt("lambda=%.2f dlambda=%.2f", l, dl), err, tol});
    }
  }
  return finish(std::move(r), worst, tol);
}

template <class F>
CheckResult guarded(const char* name, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return CheckResult{name, false, std::string("exception: ") + e.what(), {}};
  }
}

}  // namespace

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

std::vector<std::string> ValidationReport::failed() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c.name);
  }
  return out;
}

ValidationReport run_validation(const ValidationKernels& k,
                                const ValidationOptions& opt) {
  ValidationReport rep;
  rep.checks.push_back(guarded("fidelity_beta_exact",
                               [&] { return check_fidelity_beta_exact(k, opt); }));
  rep.checks.push_back(guarded("cv_vs_fidelity", [&] { return check_cv_vs_fidelity(k); }));
  rep.checks.push_back(guarded("chi_beta_vs_cv", [&] { return check_chi_beta_vs_cv(k); }));
  rep.checks.push_back(guarded("chi_lambda_vs_chi", [&] { return check_chi_lambda_vs_chi(k); }));
  rep.checks.push_back(guarded("fidelity_lambda_bound",
                               [&] { return check_fidelity_lambda_bound(k); }));
  rep.checks.push_back(guarded("ground_state_limit", [] { return check_ground_state_limit(); }));
  return rep;
}

}  // namespace thermofid::validation
