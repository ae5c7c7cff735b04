#include "specwave/basis.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <sstream>
#include <utility>

#include "specwave/errors.hpp"

namespace specwave {

namespace {

constexpr std::int64_t kMaxTableEntries = 4'000'000;

[[noreturn]] void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Hermite functions phi_0..phi_{count-1} at the given points, by the
// normalized three-term recurrence
//   phi_{k+1} = x sqrt(2/(k+1)) phi_k - sqrt(k/(k+1)) phi_{k-1},
//   phi_0 = pi^{-1/4} e^{-x^2/2}.
// Stable for all k since the functions stay O(1).
Eigen::MatrixXd hermite_function_rows(int count, const Eigen::VectorXd& x) {
  const int q = static_cast<int>(x.size());
  Eigen::MatrixXd rows(count, q);
  const double root4_pi = std::pow(std::numbers::pi, -0.25);
  for (int j = 0; j < q; ++j) {
    const double xj = x(j);
    double prev = 0.0;
    double cur = root4_pi * std::exp(-0.5 * xj * xj);
    for (int k = 0; k < count; ++k) {
      rows(k, j) = cur;
      const double next =
          xj * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
      prev = cur;
      cur = next;
    }
  }
  return rows;
}

// Gauss-Hermite nodes: eigenvalues of the Jacobi matrix with off-diagonal
// sqrt(k/2). Weights are not taken from the eigenvectors; the factory uses
// the reciprocal Christoffel sum instead, which is exact in the same degree
// range and avoids forming e^{x^2}.
Eigen::VectorXd gauss_hermite_nodes(int q) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(q, q);
  for (int k = 1; k < q; ++k) {
    const double off = std::sqrt(0.5 * k);
    jacobi(k, k - 1) = off;
    jacobi(k - 1, k) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::Internal, "Gauss-Hermite node solve failed");
  return solver.eigenvalues();
}

// All multi-indices in {0..per_axis-1}^dim, lexicographic.
std::vector<std::vector<int>> enumerate_indices(int dim, int per_axis) {
  std::vector<std::vector<int>> out;
  std::vector<int> idx(dim, 0);
  while (true) {
    out.push_back(idx);
    int axis = dim - 1;
    while (axis >= 0 && ++idx[axis] == per_axis) idx[axis--] = 0;
    if (axis < 0) break;
  }
  return out;
}

struct ModeOrder {
  double lambda;
  std::vector<int> label;
  int original;
};

// Ascending eigenvalue, ties broken by label lexicographic order so equal
// eigenvalues always enumerate the same way.
void sort_modes(std::vector<ModeOrder>& modes) {
  std::stable_sort(modes.begin(), modes.end(), [](const ModeOrder& a, const ModeOrder& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return a.label < b.label;
  });
}

void check_table_budget(std::int64_t mode_count, std::int64_t node_count) {
  if (mode_count <= 0 || node_count <= 0)
    fail(ErrorCode::InvalidArgument, "basis must have at least one mode and one node");
  if (mode_count * node_count > kMaxTableEntries)
    fail(ErrorCode::InvalidArgument,
         "eigenfunction table would hold " + std::to_string(mode_count * node_count) +
             " entries, above the supported " + std::to_string(kMaxTableEntries));
}

}  // namespace

Basis::Basis(std::string family, int dimension, Eigen::VectorXd eigenvalues,
             Eigen::MatrixXd table, Eigen::MatrixXd nodes, Eigen::VectorXd weights,
             std::vector<std::vector<int>> labels, bool bottom_is_infimum, double gram_tolerance)
    : family_(std::move(family)),
      dimension_(dimension),
      eigenvalues_(std::move(eigenvalues)),
      table_(std::move(table)),
      nodes_(std::move(nodes)),
      weights_(std::move(weights)),
      labels_(std::move(labels)),
      bottom_is_infimum_(bottom_is_infimum),
      gram_tolerance_(gram_tolerance) {
  const auto n = eigenvalues_.size();
  const auto q = weights_.size();
  if (dimension_ < 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
  check_table_budget(n, q);
  if (table_.rows() != n || table_.cols() != q)
    fail(ErrorCode::DimensionMismatch, "eigenfunction table must be modes x nodes");
  if (nodes_.rows() != q || nodes_.cols() != dimension_)
    fail(ErrorCode::DimensionMismatch, "node matrix must be nodes x dimension");
  if (labels_.size() != static_cast<std::size_t>(n))
    fail(ErrorCode::DimensionMismatch, "one label per mode required");
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lam = eigenvalues_(i);
    if (!std::isfinite(lam) || lam < 0.0)
      fail(ErrorCode::Validation, "eigenvalue " + std::to_string(i) + " = " + num(lam) +
                                      " is not finite and nonnegative");
    if (i > 0 && lam < eigenvalues_(i - 1))
      fail(ErrorCode::Internal, "eigenvalues not sorted after mode ordering");
  }
  for (Eigen::Index j = 0; j < q; ++j) {
    if (!std::isfinite(weights_(j)) || weights_(j) <= 0.0)
      fail(ErrorCode::Validation,
           "quadrature weight " + std::to_string(j) + " = " + num(weights_(j)) +
               " is not finite and positive");
  }
  if (!table_.allFinite()) fail(ErrorCode::Validation, "eigenfunction table has non-finite entries");
  if (!nodes_.allFinite()) fail(ErrorCode::Validation, "node coordinates have non-finite entries");

  Eigen::MatrixXd weighted = table_ * weights_.asDiagonal();
  Eigen::MatrixXd gram = weighted * table_.transpose();
  gram.diagonal().array() -= 1.0;
  Eigen::Index wi = 0, wj = 0;
  gram_defect_ = gram.cwiseAbs().maxCoeff(&wi, &wj);
  if (gram_defect_ > gram_tolerance)
    fail(ErrorCode::Validation,
         "eigenfunction table is not orthonormal under the quadrature: |Gram - I| reaches " +
             num(gram_defect_) + " at modes (" + std::to_string(wi) + ", " + std::to_string(wj) +
             "), tolerance " + num(gram_tolerance));
}

Basis make_harmonic_oscillator(const HarmonicOscillatorSpec& spec) {
  if (spec.dimension < 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
  if (spec.max_degree < 1) fail(ErrorCode::InvalidArgument, "max_degree must be >= 1");
  if (spec.max_degree > 500)
    fail(ErrorCode::InvalidArgument,
         "max_degree " + std::to_string(spec.max_degree) + " exceeds the supported 500");
  int q1 = spec.quadrature_size > 0 ? spec.quadrature_size : spec.max_degree + 1;
  if (q1 < spec.max_degree + 1)
    fail(ErrorCode::InvalidArgument,
         "quadrature_size must be at least max_degree + 1 = " + std::to_string(spec.max_degree + 1));

  const int dim = spec.dimension;
  const int per_axis = spec.max_degree + 1;
  std::int64_t mode_count = 1, node_count = 1;
  for (int a = 0; a < dim; ++a) {
    mode_count *= per_axis;
    node_count *= q1;
    check_table_budget(mode_count, node_count);
  }

  const Eigen::VectorXd x1 = gauss_hermite_nodes(q1);
  // Rows up to degree q1-1: the first per_axis are the retained modes, the
  // full set feeds the Christoffel weights.
  const Eigen::MatrixXd rows = hermite_function_rows(q1, x1);
  Eigen::VectorXd w1(q1);
  for (int j = 0; j < q1; ++j) w1(j) = 1.0 / rows.col(j).squaredNorm();

  const auto node_idx = enumerate_indices(dim, q1);
  Eigen::MatrixXd nodes(node_count, dim);
  Eigen::VectorXd weights(node_count);
  for (std::int64_t g = 0; g < node_count; ++g) {
    double w = 1.0;
    for (int a = 0; a < dim; ++a) {
      nodes(g, a) = x1(node_idx[g][a]);
      w *= w1(node_idx[g][a]);
    }
    weights(g) = w;
  }

  auto mode_idx = enumerate_indices(dim, per_axis);
  std::vector<ModeOrder> order(mode_idx.size());
  for (std::size_t mth = 0; mth < mode_idx.size(); ++mth) {
    double lambda = 0.0;
    for (int a = 0; a < dim; ++a) lambda += 2.0 * mode_idx[mth][a] + 1.0;
    order[mth] = {lambda, mode_idx[mth], static_cast<int>(mth)};
  }
  sort_modes(order);

  Eigen::VectorXd eigenvalues(mode_count);
  Eigen::MatrixXd table(mode_count, node_count);
  std::vector<std::vector<int>> labels(order.size());
  for (std::int64_t mth = 0; mth < mode_count; ++mth) {
    eigenvalues(mth) = order[mth].lambda;
    labels[mth] = order[mth].label;
    for (std::int64_t g = 0; g < node_count; ++g) {
      double v = 1.0;
      for (int a = 0; a < dim; ++a) v *= rows(order[mth].label[a], node_idx[g][a]);
      table(mth, g) = v;
    }
  }

  return Basis("hermite", dim, std::move(eigenvalues), std::move(table), std::move(nodes),
               std::move(weights), std::move(labels), /*bottom_is_infimum=*/true,
               /*gram_tolerance=*/1e-10);
}

Basis make_torus(const TorusSpec& spec) {
  if (spec.dimension < 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
  if (spec.max_frequency < 1) fail(ErrorCode::InvalidArgument, "max_frequency must be >= 1");
  const int kmax = spec.max_frequency;
  int g1 = spec.grid_size > 0 ? spec.grid_size : 2 * kmax + 1;
  if (g1 <= 2 * kmax)
    fail(ErrorCode::InvalidArgument,
         "grid_size must exceed 2 * max_frequency = " + std::to_string(2 * kmax) +
             " for the quadrature to resolve all mode products");

  const int dim = spec.dimension;
  const int per_axis = 2 * kmax + 1;  // codes 0 (const), 2k-1 (cos), 2k (sin)
  std::int64_t mode_count = 1, node_count = 1;
  for (int a = 0; a < dim; ++a) {
    mode_count *= per_axis;
    node_count *= g1;
    check_table_budget(mode_count, node_count);
  }

  const double two_pi = 2.0 * std::numbers::pi;
  Eigen::VectorXd x1(g1);
  for (int j = 0; j < g1; ++j) x1(j) = two_pi * j / g1;

  // Per-axis values axis_rows(code, j) and squared frequency per code.
  Eigen::MatrixXd axis_rows(per_axis, g1);
  std::vector<double> axis_lambda(per_axis);
  const double c0 = 1.0 / std::sqrt(two_pi);
  const double c1 = 1.0 / std::sqrt(std::numbers::pi);
  for (int j = 0; j < g1; ++j) axis_rows(0, j) = c0;
  axis_lambda[0] = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    for (int j = 0; j < g1; ++j) {
      axis_rows(2 * k - 1, j) = c1 * std::cos(k * x1(j));
      axis_rows(2 * k, j) = c1 * std::sin(k * x1(j));
    }
    axis_lambda[2 * k - 1] = static_cast<double>(k) * k;
    axis_lambda[2 * k] = static_cast<double>(k) * k;
  }

  const auto node_idx = enumerate_indices(dim, g1);
  Eigen::MatrixXd nodes(node_count, dim);
  Eigen::VectorXd weights(node_count);
  const double w1 = two_pi / g1;
  double wprod = 1.0;
  for (int a = 0; a < dim; ++a) wprod *= w1;
  for (std::int64_t g = 0; g < node_count; ++g) {
    for (int a = 0; a < dim; ++a) nodes(g, a) = x1(node_idx[g][a]);
    weights(g) = wprod;
  }

  auto mode_idx = enumerate_indices(dim, per_axis);
  std::vector<ModeOrder> order(mode_idx.size());
  for (std::size_t mth = 0; mth < mode_idx.size(); ++mth) {
    double lambda = 0.0;
    for (int a = 0; a < dim; ++a) lambda += axis_lambda[mode_idx[mth][a]];
    order[mth] = {lambda, mode_idx[mth], static_cast<int>(mth)};
  }
  sort_modes(order);

  Eigen::VectorXd eigenvalues(mode_count);
  Eigen::MatrixXd table(mode_count, node_count);
  std::vector<std::vector<int>> labels(order.size());
  for (std::int64_t mth = 0; mth < mode_count; ++mth) {
    eigenvalues(mth) = order[mth].lambda;
    labels[mth] = order[mth].label;
    for (std::int64_t g = 0; g < node_count; ++g) {
      double v = 1.0;
      for (int a = 0; a < dim; ++a) v *= axis_rows(order[mth].label[a], node_idx[g][a]);
      table(mth, g) = v;
    }
  }

  return Basis("torus", dim, std::move(eigenvalues), std::move(table), std::move(nodes),
               std::move(weights), std::move(labels), /*bottom_is_infimum=*/true,
               /*gram_tolerance=*/1e-10);
}

namespace {

Basis build_explicit(const std::string& family, const ExplicitOperatorSpec& spec,
                     std::vector<std::vector<int>> labels) {
  const auto n = spec.eigenvalues.size();
  if (labels.empty()) {
    labels.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) labels[i] = {static_cast<int>(i)};
  } else if (labels.size() != static_cast<std::size_t>(n)) {
    fail(ErrorCode::Validation, "label list length does not match eigenvalue count");
  }
  std::vector<ModeOrder> order(n);
  for (Eigen::Index i = 0; i < n; ++i)
    order[i] = {spec.eigenvalues(i), labels[i], static_cast<int>(i)};
  sort_modes(order);

  Eigen::VectorXd eigenvalues(n);
  Eigen::MatrixXd table(n, spec.eigenfunction_table.cols());
  std::vector<std::vector<int>> sorted_labels(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    eigenvalues(i) = order[i].lambda;
    sorted_labels[i] = order[i].label;
    if (order[i].original >= spec.eigenfunction_table.rows())
      fail(ErrorCode::DimensionMismatch, "eigenfunction table has fewer rows than eigenvalues");
    table.row(i) = spec.eigenfunction_table.row(order[i].original);
  }

  return Basis(family, spec.dimension, std::move(eigenvalues), std::move(table), spec.nodes,
               spec.weights, std::move(sorted_labels), spec.bottom_is_infimum,
               spec.gram_tolerance);
}

}  // namespace

Basis make_explicit(const ExplicitOperatorSpec& spec) {
  if (spec.eigenvalues.size() == 0)
    fail(ErrorCode::InvalidArgument, "explicit operator needs at least one eigenpair");
  if (spec.eigenfunction_table.rows() != spec.eigenvalues.size())
    fail(ErrorCode::DimensionMismatch, "eigenfunction table needs one row per eigenvalue");
  return build_explicit("explicit", spec, {});
}

void save_basis_json(const Basis& basis, const std::string& path) {
  nlohmann::json doc;
  doc["format"] = "specwave-basis";
  doc["version"] = 1;
  doc["family"] = basis.family();
  doc["dimension"] = basis.dimension();
  doc["bottom_is_infimum"] = basis.bottom_is_infimum();
  doc["gram_tolerance"] = basis.gram_tolerance();
  doc["eigenvalues"] = std::vector<double>(basis.eigenvalues().begin(), basis.eigenvalues().end());
  doc["weights"] = std::vector<double>(basis.weights().begin(), basis.weights().end());
  auto nodes = nlohmann::json::array();
  for (Eigen::Index q = 0; q < basis.nodes().rows(); ++q) {
    auto point = nlohmann::json::array();
    for (int a = 0; a < basis.dimension(); ++a) point.push_back(basis.nodes()(q, a));
    nodes.push_back(std::move(point));
  }
  doc["nodes"] = std::move(nodes);
  auto table = nlohmann::json::array();
  for (Eigen::Index i = 0; i < basis.eigenfunctions().rows(); ++i) {
    auto row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < basis.eigenfunctions().cols(); ++j)
      row.push_back(basis.eigenfunctions()(i, j));
    table.push_back(std::move(row));
  }
  doc["eigenfunctions"] = std::move(table);
  doc["labels"] = basis.mode_labels();

  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot open " + path + " for writing");
  out << doc.dump(1, ' ') << '\n';
  if (!out) fail(ErrorCode::Io, "failed writing " + path);
}

Basis load_basis_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Io, "cannot parse " + path + ": " + e.what());
  }
  try {
    if (doc.value("format", "") != "specwave-basis")
      fail(ErrorCode::Validation, path + " is not a basis file (missing format tag)");
    ExplicitOperatorSpec spec;
    spec.dimension = doc.at("dimension").get<int>();
    spec.bottom_is_infimum = doc.value("bottom_is_infimum", true);
    spec.gram_tolerance = doc.value("gram_tolerance", 1e-8);
    const auto& ev = doc.at("eigenvalues");
    spec.eigenvalues.resize(ev.size());
    for (std::size_t i = 0; i < ev.size(); ++i) spec.eigenvalues(i) = ev[i].get<double>();
    const auto& w = doc.at("weights");
    spec.weights.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) spec.weights(i) = w[i].get<double>();
    const auto& nd = doc.at("nodes");
    spec.nodes.resize(nd.size(), spec.dimension);
    for (std::size_t q = 0; q < nd.size(); ++q) {
      if (nd[q].size() != static_cast<std::size_t>(spec.dimension))
        fail(ErrorCode::Validation, "node " + std::to_string(q) + " has wrong dimension");
      for (int a = 0; a < spec.dimension; ++a) spec.nodes(q, a) = nd[q][a].get<double>();
    }
    const auto& tb = doc.at("eigenfunctions");
    if (tb.size() != ev.size())
      fail(ErrorCode::Validation, "eigenfunction table needs one row per eigenvalue");
    spec.eigenfunction_table.resize(tb.size(), w.size());
    for (std::size_t i = 0; i < tb.size(); ++i) {
      if (tb[i].size() != w.size())
        fail(ErrorCode::Validation, "eigenfunction row " + std::to_string(i) + " has wrong length");
      for (std::size_t j = 0; j < w.size(); ++j)
        spec.eigenfunction_table(i, j) = tb[i][j].get<double>();
    }
    std::vector<std::vector<int>> labels;
    if (doc.contains("labels")) labels = doc["labels"].get<std::vector<std::vector<int>>>();
    // Round-trip fidelity: shipped tables are written sorted, the stable
    // tie-break keeps them in place, and shortest round-trip decimals parse
    // back to the identical doubles.
    return build_explicit(doc.value("family", "explicit"), spec, std::move(labels));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Validation, "malformed basis file " + path + ": " + e.what());
  }
}

}  // namespace specwave
