#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

namespace entdist {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Dense matrices only; operators above this total dimension are rejected.
inline constexpr int kMaxDim = 64;
// Pure amplitude vectors may be larger (multi-rail trajectory sampling).
inline constexpr int kMaxPureDim = 4096;

inline constexpr double kHermTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;

/// Hermitian eigendecomposition, eigenvalues in descending order.
struct EigH {
  RVec values;
  Mat vectors;  // column i pairs with values[i]
};

/// Hermitian, PSD (within kPsdTol), unit-trace operator together with the
/// ordered list of subsystem dimensions. Subsystem order is the tensor
/// concatenation order; all index sets refer to it.
class DensityMatrix {
 public:
  DensityMatrix(Mat m, std::vector<int> dims);

  const Mat& mat() const { return rho_; }
  const std::vector<int>& dims() const { return dims_; }
  int dim() const { return static_cast<int>(rho_.rows()); }
  int subsystems() const { return static_cast<int>(dims_.size()); }

  /// Same operator, dims re-partitioned (product must match).
  DensityMatrix regrouped(std::vector<int> new_dims) const;

  static DensityMatrix from_pure(const Vec& amps, std::vector<int> dims);

 private:
  Mat rho_;
  std::vector<int> dims_;
};

/// Unit-norm amplitude vector with subsystem dimensions.
class PureState {
 public:
  PureState(Vec amps, std::vector<int> dims);
  const Vec& amps() const { return amps_; }
  const std::vector<int>& dims() const { return dims_; }
  int dim() const { return static_cast<int>(amps_.size()); }

 private:
  Vec amps_;
  std::vector<int> dims_;
};

Mat kron(const Mat& a, const Mat& b);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Trace out every subsystem not listed in `keep`; result dims follow the
/// original order restricted to `keep`.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);
Mat partial_trace_mat(const Mat& m, const std::vector<int>& dims, const std::vector<int>& keep);

/// Transpose the listed subsystems in place. Hermiticity is preserved,
/// positivity is not.
Mat partial_transpose(const DensityMatrix& rho, const std::vector<int>& part);
Mat partial_transpose_mat(const Mat& m, const std::vector<int>& dims, const std::vector<int>& part);

/// Reorder subsystems: new position i holds old subsystem perm[i].
Mat permute_subsystems_mat(const Mat& m, const std::vector<int>& dims, const std::vector<int>& perm);

EigH eig_hermitian(const Mat& m);

/// Sum of singular values (for Hermitian input, sum of |eigenvalues|).
double trace_norm(const Mat& m);

/// Squared Uhlmann fidelity, in [0, 1].
double fidelity(const DensityMatrix& a, const DensityMatrix& b);
/// Half trace norm of the difference, in [0, 1].
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
std::pair<double, double> fidelity_and_trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Spectral clip of eigenvalues in [-kPsdTol, 0) to zero.
Mat clip_psd(const Mat& m);

/// Maximally entangled state phi_d with dims [d, d].
Vec max_entangled_vec(int d);
DensityMatrix max_entangled(int d);

/// Purification with a d-dimensional reference system in front: dims [d, d].
PureState purify(const DensityMatrix& rho);

}  // namespace entdist
