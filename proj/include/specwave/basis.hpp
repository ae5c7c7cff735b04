#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace specwave {

// A discretized model operator: a finite family of eigenpairs {lambda_xi, e_xi}
// together with a quadrature rule under which the tabulated eigenfunctions are
// orthonormal. Everything downstream (transforms, propagators, fixed-point
// solves) works purely through this table, so the three shipped constructions
// and user-supplied operators are interchangeable.
//
// Invariants established at construction and relied on everywhere:
//   - eigenvalues are finite, nonnegative, sorted ascending; ties are broken
//     by the lexicographic order of the generating multi-index, so equal
//     eigenvalues have a deterministic mode order;
//   - the Gram matrix of the table under the quadrature weights deviates from
//     the identity by at most the recorded gram_defect (entrywise max).
class Basis {
 public:
  int dimension() const { return dimension_; }
  int mode_count() const { return static_cast<int>(eigenvalues_.size()); }
  int node_count() const { return static_cast<int>(weights_.size()); }

  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  double eigenvalue(int mode) const { return eigenvalues_(mode); }

  // Smallest retained eigenvalue. bottom_is_infimum reports whether the
  // truncation kept the true bottom of the spectrum (always true for the
  // shipped constructions; declared by the user for explicit operators).
  double bottom() const { return eigenvalues_(0); }
  bool bottom_is_infimum() const { return bottom_is_infimum_; }

  // Row xi holds e_xi sampled at the quadrature nodes.  (modes x nodes)
  const Eigen::MatrixXd& eigenfunctions() const { return table_; }

  // Row q is the q-th node as a point in R^dimension.  (nodes x dimension)
  const Eigen::MatrixXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  // Generating multi-index per mode (degree vector, frequency code vector, or
  // plain index for explicit operators); used for the deterministic tie-break
  // and kept for diagnostics.
  const std::vector<std::vector<int>>& mode_labels() const { return labels_; }

  // Entrywise max of |Gram - I| measured on the final table, and the
  // tolerance it was admitted under.
  double gram_defect() const { return gram_defect_; }
  double gram_tolerance() const { return gram_tolerance_; }

  const std::string& family() const { return family_; }

  // Used by the factory functions below; not intended to be called directly.
  Basis(std::string family, int dimension, Eigen::VectorXd eigenvalues,
        Eigen::MatrixXd table, Eigen::MatrixXd nodes, Eigen::VectorXd weights,
        std::vector<std::vector<int>> labels, bool bottom_is_infimum,
        double gram_tolerance);

 private:
  std::string family_;
  int dimension_ = 0;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd table_;    // modes x nodes
  Eigen::MatrixXd nodes_;    // nodes x dimension
  Eigen::VectorXd weights_;  // nodes
  std::vector<std::vector<int>> labels_;
  bool bottom_is_infimum_ = true;
  double gram_defect_ = 0.0;
  double gram_tolerance_ = 0.0;
};

struct HarmonicOscillatorSpec {
  int dimension = 1;        // n >= 1
  int max_degree = 1;       // per-axis Hermite degree cutoff, 1..500
  int quadrature_size = 0;  // per-axis Gauss-Hermite size; 0 -> max_degree + 1
};

struct TorusSpec {
  int dimension = 1;      // n >= 1
  int max_frequency = 1;  // per-axis frequency cutoff k_max >= 1
  int grid_size = 0;      // per-axis uniform grid; 0 -> 2*max_frequency + 1,
                          // must exceed 2*max_frequency (trig exactness)
};

struct ExplicitOperatorSpec {
  int dimension = 1;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenfunction_table;  // modes x nodes
  Eigen::MatrixXd nodes;                // nodes x dimension
  Eigen::VectorXd weights;
  bool bottom_is_infimum = true;
  double gram_tolerance = 1e-8;  // rejection threshold for |Gram - I|
};

// Quantum harmonic oscillator -Δ + |x|^2 on R^n: tensor Hermite functions,
// eigenvalue sum(2 k_j + 1), Gauss-Hermite nodes with weights rescaled so the
// plain (unweighted) L^2 inner product of the tabulated functions is exact.
Basis make_harmonic_oscillator(const HarmonicOscillatorSpec& spec);

// Laplacian on the flat torus T^n with the real trigonometric eigenfunctions
// {1/sqrt(2 pi), cos(k x)/sqrt(pi), sin(k x)/sqrt(pi)} per axis, eigenvalue
// |k|^2, uniform grid quadrature. Bottom eigenvalue is 0, so a positive mass
// term is required downstream.
Basis make_torus(const TorusSpec& spec);

// User-supplied operator; validated (sorted after permutation, nonnegative,
// orthonormal within gram_tolerance) and rejected with a descriptive error
// otherwise.
Basis make_explicit(const ExplicitOperatorSpec& spec);

// JSON round-trip for the full table (schema documented in the README).
void save_basis_json(const Basis& basis, const std::string& path);
Basis load_basis_json(const std::string& path);

}  // namespace specwave
