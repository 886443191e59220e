#include "thermofid/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "thermofid/errors.hpp"

namespace thermofid::oracle {
namespace {

using Solver = Eigen::SelfAdjointEigenSolver<Matrix>;

Solver decompose(const Matrix& m, Eigen::DecompositionOptions opt = Eigen::ComputeEigenvectors) {
  Solver s(m, opt);
  if (s.info() != Eigen::Success) {
    throw EigensolverError("oracle: Hermitian eigensolver did not converge");
  }
  return s;
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

// V diag(sqrt(max(w, 0))) V^dagger.
Matrix psd_sqrt(const Matrix& m) {
  const Solver s = decompose(hermitian_part(m));
  Eigen::VectorXd w = s.eigenvalues();
  if (w.minCoeff() < -kClampTol) {
    throw NegativeEigenvalue("oracle: eigenvalue " + std::to_string(w.minCoeff()) +
                             " below clamp tolerance");
  }
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::sqrt(std::max(w(i), 0.0));
  return s.eigenvectors() * w.asDiagonal() * s.eigenvectors().adjoint();
}

}  // namespace

DenseHamiltonian::DenseHamiltonian(Matrix h) : h_(std::move(h)) {
  if (h_.rows() != h_.cols() || h_.rows() == 0) {
    throw DomainError("DenseHamiltonian: matrix must be square and non-empty");
  }
  if (h_.rows() > kMaxDimension) {
    throw DomainError("DenseHamiltonian: dimension exceeds " +
                      std::to_string(kMaxDimension));
  }
  if ((h_ - h_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw DomainError("DenseHamiltonian: matrix is not Hermitian");
  }
}

DensityMatrix::DensityMatrix(Matrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0) {
    throw DomainError("DensityMatrix: matrix must be square and non-empty");
  }
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw DomainError("DensityMatrix: matrix is not Hermitian");
  }
  if (std::abs(rho_.trace() - std::complex<double>(1.0, 0.0)) > kTraceTol) {
    throw DomainError("DensityMatrix: trace differs from 1");
  }
  const Solver s = decompose(hermitian_part(rho_), Eigen::EigenvaluesOnly);
  if (s.eigenvalues().minCoeff() < -kTraceTol) {
    throw DomainError("DensityMatrix: negative eigenvalue");
  }
}

DensityMatrix gibbs_state(const DenseHamiltonian& h, double beta) {
  if (!(beta > 0.0)) throw DomainError("gibbs_state: beta must be > 0");
  const Solver s = decompose(h.matrix());
  const Eigen::VectorXd& e = s.eigenvalues();
  Eigen::VectorXd w(e.size());
  const double e0 = e.minCoeff();
  for (Eigen::Index i = 0; i < e.size(); ++i) w(i) = std::exp(-beta * (e(i) - e0));
  w /= w.sum();
  Matrix rho = s.eigenvectors() * w.asDiagonal() * s.eigenvectors().adjoint();
  rho = hermitian_part(rho);
  rho /= rho.trace().real();
  return DensityMatrix(std::move(rho));
}

double log_partition(const DenseHamiltonian& h, double beta) {
  const Solver s = decompose(h.matrix(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& e = s.eigenvalues();
  const double e0 = e.minCoeff();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < e.size(); ++i) sum += std::exp(-beta * (e(i) - e0));
  return std::log(sum) - beta * e0;
}

double uhlmann_fidelity(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  if (rho0.dimension() != rho1.dimension()) {
    throw DomainError("uhlmann_fidelity: dimension mismatch");
  }
  const Matrix s0 = psd_sqrt(rho0.matrix());
  const Matrix inner = hermitian_part(s0 * rho1.matrix() * s0);
  const Solver s = decompose(inner, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& w = s.eigenvalues();
  if (w.minCoeff() < -kClampTol) {
    throw NegativeEigenvalue("uhlmann_fidelity: sqrt(rho0) rho1 sqrt(rho0) not PSD");
  }
  double f = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) f += std::sqrt(std::max(w(i), 0.0));
  return std::clamp(f, 0.0, 1.0);
}

double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

double trotter_delta2(const DenseHamiltonian& h0, const DenseHamiltonian& h1) {
  const Matrix c = commutator(h0.matrix(), h1.matrix());
  return (operator_norm(commutator(c, h1.matrix())) +
          0.5 * operator_norm(commutator(c, h0.matrix()))) /
         12.0;
}

double trotter_bound(const DenseHamiltonian& h0, const DenseHamiltonian& h1,
                     double beta) {
  if (!(beta > 0.0)) throw DomainError("trotter_bound: beta must be > 0");
  const double d2 = trotter_delta2(h0, h1);
  if (d2 == 0.0) return 0.0;
  return beta * beta * beta * d2 *
         std::exp(beta * operator_norm(h0.matrix()) +
                  beta * operator_norm(h1.matrix()));
}

double fidelity_lambda_exact(const DenseHamiltonian& h0,
                             const DenseHamiltonian& h1, double beta) {
  return uhlmann_fidelity(gibbs_state(h0, beta), gibbs_state(h1, beta));
}

double ground_state_overlap(const DenseHamiltonian& h0,
                            const DenseHamiltonian& h1) {
  const Solver s0 = decompose(h0.matrix());
  const Solver s1 = decompose(h1.matrix());
  return std::abs(s0.eigenvectors().col(0).dot(s1.eigenvectors().col(0)));
}

// ---------------------------------------------------------------------------

Matrix pauli(char which) {
  using C = std::complex<double>;
  Matrix m(2, 2);
  switch (which) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, C(0, -1), C(0, 1), 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    case 'i': m << 1, 0, 0, 1; break;
    default: throw DomainError(std::string("pauli: unknown component ") + which);
  }
  return m;
}

Matrix site_operator(char which, int site, int n_sites) {
  if (site < 0 || site >= n_sites) throw DomainError("site_operator: site out of range");
  Matrix out = Matrix::Identity(1, 1);
  for (int k = 0; k < n_sites; ++k) {
    const Matrix f = pauli(k == site ? which : 'i');
    Matrix next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c)
        next.block(2 * r, 2 * c, 2, 2) = out(r, c) * f;
    out = std::move(next);
  }
  return out;
}

DenseHamiltonian transverse_ising_chain(int n_sites, double j, double lambda,
                                        double longitudinal) {
  if (n_sites < 1) throw DomainError("transverse_ising_chain: n_sites must be >= 1");
  const Eigen::Index d = Eigen::Index{1} << n_sites;
  Matrix h = Matrix::Zero(d, d);
  for (int i = 0; i + 1 < n_sites; ++i) {
    h -= j * site_operator('z', i, n_sites) * site_operator('z', i + 1, n_sites);
  }
  for (int i = 0; i < n_sites; ++i) {
    h -= lambda * site_operator('x', i, n_sites);
    h -= longitudinal * site_operator('z', i, n_sites);
  }
  return DenseHamiltonian(std::move(h));
}

Matrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) g(r, c) = {gauss(rng), gauss(rng)};
  return hermitian_part(g) / std::sqrt(static_cast<double>(dim));
}

DenseModel::DenseModel(Matrix h0, Matrix v) : h0_(std::move(h0)), v_(std::move(v)) {
  DenseHamiltonian check0(h0_);
  DenseHamiltonian check1(v_);
  if (h0_.rows() != v_.rows()) throw DomainError("DenseModel: dimension mismatch");
}

DenseHamiltonian DenseModel::hamiltonian(double lambda) const {
  return DenseHamiltonian(h0_ + lambda * v_);
}

double DenseModel::log_z(double beta, double lambda) const {
  return log_partition(hamiltonian(lambda), beta);
}

}  // namespace thermofid::oracle
