#include "thermofid/lmg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "thermofid/errors.hpp"
#include "thermofid/numerics.hpp"

namespace thermofid::lmg {

void validate(const LmgParams& p) {
  if (p.n_spins < 2) throw DomainError("lmg: n_spins must be >= 2");
  if (!(p.gamma >= 0.0 && p.gamma <= 1.0)) {
    throw DomainError("lmg: gamma must lie in [0, 1]");
  }
  if (!(p.lambda >= 0.0) || !std::isfinite(p.lambda)) {
    throw DomainError("lmg: lambda must be >= 0 and finite");
  }
}

std::string to_string(Sectors s) {
  return s == Sectors::Maximal ? "maximal" : "all";
}

Sectors parse_sectors(const std::string& s) {
  if (s == "maximal") return Sectors::Maximal;
  if (s == "all") return Sectors::All;
  throw DomainError("lmg: sectors must be \"maximal\" or \"all\", got \"" + s +
                    "\"");
}

// ---------------------------------------------------------------------------

SpinSectorMatrix::SpinSectorMatrix(int twice_spin, std::vector<double> diagonal,
                                   std::vector<double> off_diagonal)
    : twice_spin_(twice_spin),
      diagonal_(std::move(diagonal)),
      off_diagonal_(std::move(off_diagonal)) {
  const std::size_t d = diagonal_.size();
  if (d != static_cast<std::size_t>(twice_spin_) + 1 ||
      off_diagonal_.size() != (d >= 2 ? d - 2 : 0)) {
    throw DomainError("SpinSectorMatrix: inconsistent sizes");
  }
}

double SpinSectorMatrix::at(std::size_t i, std::size_t j) const {
  if (i == j) return diagonal_.at(i);
  if (j == i + 2) return off_diagonal_.at(i);
  if (i == j + 2) return off_diagonal_.at(j);
  return 0.0;
}

Eigen::MatrixXd SpinSectorMatrix::dense() const {
  const auto d = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) h(i, i) = diagonal_[i];
  for (std::size_t i = 0; i < off_diagonal_.size(); ++i) {
    const auto a = static_cast<Eigen::Index>(i);
    h(a, a + 2) = off_diagonal_[i];
    h(a + 2, a) = off_diagonal_[i];
  }
  return h;
}

std::array<SpinSectorMatrix::Block, 2> SpinSectorMatrix::parity_blocks() const {
  std::array<Block, 2> blocks;
  for (std::size_t parity = 0; parity < 2; ++parity) {
    Block& b = blocks[parity];
    for (std::size_t i = parity; i < dimension(); i += 2) {
      b.diagonal.push_back(diagonal_[i]);
      if (i + 2 < dimension()) b.sub.push_back(off_diagonal_[i]);
    }
  }
  return blocks;
}

SpinSectorMatrix lmg_build_sector(const LmgParams& p, int twice_spin) {
  validate(p);
  if (twice_spin < 0 || twice_spin > p.n_spins ||
      (p.n_spins - twice_spin) % 2 != 0) {
    throw DomainError("lmg_build_sector: invalid total spin for N = " +
                      std::to_string(p.n_spins));
  }
  const double n = p.n_spins;
  const double j = 0.5 * twice_spin;
  const double jj = j * (j + 1.0);
  const std::size_t d = static_cast<std::size_t>(twice_spin) + 1;

  std::vector<double> diag(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double m = -j + static_cast<double>(i);
    diag[i] = -(1.0 + p.gamma) / n * (jj - m * m - 0.5 * n) - 2.0 * p.lambda * m;
  }
  std::vector<double> off(d >= 2 ? d - 2 : 0);
  for (std::size_t i = 0; i < off.size(); ++i) {
    const double m = -j + static_cast<double>(i);
    const double r = (jj - m * (m + 1.0)) * (jj - (m + 1.0) * (m + 2.0));
    off[i] = -(1.0 - p.gamma) / (2.0 * n) * std::sqrt(std::max(0.0, r));
  }
  return SpinSectorMatrix(twice_spin, std::move(diag), std::move(off));
}

SpinSectorMatrix lmg_build_matrix(const LmgParams& p) {
  return lmg_build_sector(p, p.n_spins);
}

std::vector<double> sector_eigenvalues(const SpinSectorMatrix& m) {
  std::vector<double> out;
  out.reserve(m.dimension());
  for (const auto& block : m.parity_blocks()) {
    const auto n = static_cast<Eigen::Index>(block.diagonal.size());
    if (n == 0) continue;
    if (n == 1) {
      out.push_back(block.diagonal[0]);
      continue;
    }
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(block.diagonal.data(), n);
    Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(block.sub.data(), n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw EigensolverError("lmg: tridiagonal eigensolver did not converge");
    }
    const auto& ev = solver.eigenvalues();
    out.insert(out.end(), ev.data(), ev.data() + ev.size());
  }
  std::sort(out.begin(), out.end());
  return out;
}

double log_spin_multiplicity(int n_spins, int twice_spin) {
  if (twice_spin < 0 || twice_spin > n_spins || (n_spins - twice_spin) % 2 != 0) {
    throw DomainError("log_spin_multiplicity: invalid total spin");
  }
  const double n = n_spins;
  const double k = 0.5 * (n_spins - twice_spin);
  // C(N, k) (N - 2k + 1) / (N - k + 1)
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
         std::log(n - 2.0 * k + 1.0) - std::log(n - k + 1.0);
}

double LmgSpectrum::log_z(double beta) const {
  std::vector<double> terms;
  terms.reserve(sectors.size());
  std::vector<double> scratch;
  for (const auto& s : sectors) {
    scratch.resize(s.energies.size());
    for (std::size_t k = 0; k < s.energies.size(); ++k) {
      scratch[k] = -beta * (s.energies[k] - ground_energy);
    }
    terms.push_back(s.log_multiplicity + numerics::logsumexp(scratch));
  }
  return numerics::logsumexp(terms) - beta * ground_energy;
}

LmgSpectrum lmg_spectrum(const LmgParams& p, Sectors sectors) {
  validate(p);
  LmgSpectrum spec;
  const int lowest = sectors == Sectors::Maximal ? p.n_spins : p.n_spins % 2;
  spec.ground_energy = std::numeric_limits<double>::infinity();
  for (int twice_spin = p.n_spins; twice_spin >= lowest; twice_spin -= 2) {
    LmgSpectrum::Sector s;
    s.twice_spin = twice_spin;
    s.log_multiplicity =
        sectors == Sectors::Maximal ? 0.0 : log_spin_multiplicity(p.n_spins, twice_spin);
    s.energies = sector_eigenvalues(lmg_build_sector(p, twice_spin));
    spec.ground_energy = std::min(spec.ground_energy, s.energies.front());
    spec.sectors.push_back(std::move(s));
  }
  return spec;
}

double lmg_log_z(double beta, const LmgParams& p) {
  return lmg_log_z(beta, p, Sectors::Maximal);
}

double lmg_log_z(double beta, const LmgParams& p, Sectors sectors) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("lmg_log_z: beta must be positive and finite");
  }
  return lmg_spectrum(p, sectors).log_z(beta);
}

// ---------------------------------------------------------------------------

LmgModel::LmgModel(int n_spins, double gamma, Sectors sectors)
    : n_spins_(n_spins), gamma_(gamma), sectors_(sectors) {
  validate(LmgParams{n_spins_, gamma_, 0.0});
}

double LmgModel::log_z(double beta, double lambda) const {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("lmg: beta must be positive and finite");
  }
  if (cache_) {
    auto it = std::lower_bound(
        cache_->begin(), cache_->end(), lambda,
        [](const auto& entry, double l) { return entry.first < l; });
    if (it != cache_->end() && it->first == lambda) return it->second.log_z(beta);
  }
  return lmg_spectrum(LmgParams{n_spins_, gamma_, lambda}, sectors_).log_z(beta);
}

std::shared_ptr<const ThermoModel> LmgModel::prepared_for(
    std::span<const double> lambdas, Execution exec) const {
  std::vector<double> keys(lambdas.begin(), lambdas.end());
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  for (double l : keys) validate(LmgParams{n_spins_, gamma_, l});

  auto cache = std::make_shared<Cache>(keys.size());
  const auto n = static_cast<long>(keys.size());
  if (exec == Execution::Parallel) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
      try {
        (*cache)[i] = {keys[i], lmg_spectrum({n_spins_, gamma_, keys[i]}, sectors_)};
      } catch (...) {
#pragma omp critical(lmg_prepare)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (long i = 0; i < n; ++i) {
      (*cache)[i] = {keys[i], lmg_spectrum({n_spins_, gamma_, keys[i]}, sectors_)};
    }
  }
  auto prepared = std::make_shared<LmgModel>(*this);
  prepared->cache_ = std::move(cache);
  return prepared;
}

// ---------------------------------------------------------------------------

namespace {

double field_norm(double m_x, double m_y, double lambda, double gamma) {
  return std::sqrt(lambda * lambda + m_x * m_x + gamma * gamma * m_y * m_y);
}

double tanh_ratio(double beta, double s) {
  return s > 0.0 ? std::tanh(beta * s) / s : beta;
}

}  // namespace

MeanFieldResidual lmg_meanfield_residual(double m_x, double m_y, double beta,
                                         double lambda, double gamma) {
  if (!(beta > 0.0)) throw DomainError("lmg_meanfield_residual: beta must be > 0");
  const double t = tanh_ratio(beta, field_norm(m_x, m_y, lambda, gamma));
  return {m_x - t * m_x, m_y - t * gamma * m_y};
}

double lmg_meanfield_free_energy(double m_x, double m_y, double beta,
                                 double lambda, double gamma) {
  const double s = field_norm(m_x, m_y, lambda, gamma);
  return -numerics::log_2cosh(beta * s) / beta +
         0.5 * (m_x * m_x + gamma * gamma * m_y * m_y);
}

std::string to_string(MeanFieldBranch b) {
  switch (b) {
    case MeanFieldBranch::Disordered: return "disordered";
    case MeanFieldBranch::OrderedX: return "ordered_x";
    case MeanFieldBranch::OrderedY: return "ordered_y";
  }
  return "unknown";
}

MeanFieldSolution lmg_meanfield_solve(double beta, double lambda, double gamma) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("lmg_meanfield_solve: beta must be positive and finite");
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw DomainError("lmg_meanfield_solve: only the gamma < 1 branch is supported");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError("lmg_meanfield_solve: lambda must be >= 0");
  }
  // Nontrivial roots of the M_x equation satisfy tanh(beta s) = s.
  auto reduced = [&](double m) {
    return 1.0 - tanh_ratio(beta, field_norm(m, 0.0, lambda, gamma));
  };
  constexpr double lo = 1e-9;
  // At low T the root is within rounding of 1, where tanh(beta) == 1.
  constexpr double hi = 1.0;

  MeanFieldSolution trivial;
  trivial.free_energy_per_spin = lmg_meanfield_free_energy(0.0, 0.0, beta, lambda, gamma);

  const double r_lo = reduced(lo);
  const double r_hi = reduced(hi);
  if (!(r_lo < 0.0)) return trivial;
  if (!(r_hi >= 0.0)) {
    throw SolverError("lmg_meanfield_solve: M_x residual does not change sign");
  }
  const double m = numerics::bisect(reduced, lo, hi, 1e-12);
  MeanFieldSolution ordered;
  ordered.m_x = m;
  ordered.branch = MeanFieldBranch::OrderedX;
  ordered.free_energy_per_spin = lmg_meanfield_free_energy(m, 0.0, beta, lambda, gamma);
  return ordered.free_energy_per_spin < trivial.free_energy_per_spin ? ordered : trivial;
}

double lmg_meanfield_critical_temperature(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw DomainError("lmg_meanfield_critical_temperature: lambda must lie in [0, 1]");
  }
  if (lambda == 0.0) return 1.0;
  if (lambda == 1.0) return 0.0;
  return lambda / std::atanh(lambda);
}

}  // namespace thermofid::lmg
