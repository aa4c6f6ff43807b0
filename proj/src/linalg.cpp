#include "entdist/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace entdist {

namespace {

int dims_product(const std::vector<int>& dims) {
  int p = 1;
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("subsystem dimension must be >= 1");
    p *= d;
  }
  return p;
}

void check_dims_match(const std::vector<int>& dims, int size, int cap, const char* what) {
  if (dims.empty()) throw std::invalid_argument(std::string(what) + ": empty dims");
  int p = dims_product(dims);
  if (p != size)
    throw std::invalid_argument(std::string(what) + ": dims product " + std::to_string(p) +
                                " != size " + std::to_string(size));
  if (p > cap)
    throw std::invalid_argument(std::string(what) + ": dimension " + std::to_string(p) +
                                " exceeds cap " + std::to_string(cap));
}

double max_abs_asymmetry(const Mat& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Strides for row-major multi-index addressing: index = sum_i x_i * stride[i].
std::vector<int> strides_of(const std::vector<int>& dims) {
  std::vector<int> s(dims.size());
  int acc = 1;
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    s[i] = acc;
    acc *= dims[i];
  }
  return s;
}

void check_index_set(const std::vector<int>& set, int n_subsystems, const char* what) {
  if (set.empty()) throw std::invalid_argument(std::string(what) + ": empty subsystem set");
  std::vector<bool> seen(n_subsystems, false);
  for (int i : set) {
    if (i < 0 || i >= n_subsystems)
      throw std::invalid_argument(std::string(what) + ": subsystem index " + std::to_string(i) +
                                  " out of range");
    if (seen[i]) throw std::invalid_argument(std::string(what) + ": duplicate subsystem index");
    seen[i] = true;
  }
}

}  // namespace

DensityMatrix::DensityMatrix(Mat m, std::vector<int> dims) : rho_(std::move(m)), dims_(std::move(dims)) {
  if (rho_.rows() != rho_.cols()) throw std::invalid_argument("DensityMatrix: not square");
  check_dims_match(dims_, static_cast<int>(rho_.rows()), kMaxDim, "DensityMatrix");
  if (max_abs_asymmetry(rho_) > kHermTol)
    throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-12");
  double tr = rho_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol)
    throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr) + " != 1");
  Eigen::SelfAdjointEigenSolver<Mat> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTol)
    throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
}

DensityMatrix DensityMatrix::regrouped(std::vector<int> new_dims) const {
  if (dims_product(new_dims) != dim())
    throw std::invalid_argument("regrouped: dims product mismatch");
  DensityMatrix out = *this;
  out.dims_ = std::move(new_dims);
  return out;
}

DensityMatrix DensityMatrix::from_pure(const Vec& amps, std::vector<int> dims) {
  Mat m = amps * amps.adjoint();
  return DensityMatrix(std::move(m), std::move(dims));
}

PureState::PureState(Vec amps, std::vector<int> dims) : amps_(std::move(amps)), dims_(std::move(dims)) {
  check_dims_match(dims_, static_cast<int>(amps_.size()), kMaxPureDim, "PureState");
  if (std::abs(amps_.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("PureState: norm != 1");
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix(kron(a.mat(), b.mat()), std::move(dims));
}

Mat partial_trace_mat(const Mat& m, const std::vector<int>& dims, const std::vector<int>& keep) {
  const int n = static_cast<int>(dims.size());
  check_index_set(keep, n, "partial_trace");
  std::vector<int> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  std::vector<int> traced;
  for (int i = 0; i < n; ++i)
    if (!std::binary_search(keep_sorted.begin(), keep_sorted.end(), i)) traced.push_back(i);

  const std::vector<int> stride = strides_of(dims);
  int dk = 1, dt = 1;
  for (int i : keep_sorted) dk *= dims[i];
  for (int i : traced) dt *= dims[i];

  // offset of kept multi-index `a` (0..dk) into the full index, likewise traced
  std::vector<int> keep_off(dk, 0), tr_off(dt, 0);
  {
    for (int a = 0; a < dk; ++a) {
      int rem = a, off = 0;
      for (int pos = static_cast<int>(keep_sorted.size()) - 1; pos >= 0; --pos) {
        int d = dims[keep_sorted[pos]];
        off += (rem % d) * stride[keep_sorted[pos]];
        rem /= d;
      }
      keep_off[a] = off;
    }
    for (int t = 0; t < dt; ++t) {
      int rem = t, off = 0;
      for (int pos = static_cast<int>(traced.size()) - 1; pos >= 0; --pos) {
        int d = dims[traced[pos]];
        off += (rem % d) * stride[traced[pos]];
        rem /= d;
      }
      tr_off[t] = off;
    }
  }

  Mat out = Mat::Zero(dk, dk);
  for (int a = 0; a < dk; ++a)
    for (int b = 0; b < dk; ++b) {
      Complex s(0, 0);
      for (int t = 0; t < dt; ++t) s += m(keep_off[a] + tr_off[t], keep_off[b] + tr_off[t]);
      out(a, b) = s;
    }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  std::vector<int> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  Mat m = partial_trace_mat(rho.mat(), rho.dims(), keep_sorted);
  std::vector<int> new_dims;
  for (int i : keep_sorted) new_dims.push_back(rho.dims()[i]);
  // kill numerical asymmetry from summation order before revalidating
  Mat h = 0.5 * (m + m.adjoint().eval());
  return DensityMatrix(std::move(h), std::move(new_dims));
}

Mat partial_transpose_mat(const Mat& m, const std::vector<int>& dims, const std::vector<int>& part) {
  const int n = static_cast<int>(dims.size());
  check_index_set(part, n, "partial_transpose");
  std::vector<bool> flip(n, false);
  for (int i : part) flip[i] = true;

  const std::vector<int> stride = strides_of(dims);
  const int D = static_cast<int>(m.rows());
  Mat out(D, D);
  std::vector<int> ri(n), ci(n);
  for (int r = 0; r < D; ++r) {
    int rem = r;
    for (int i = 0; i < n; ++i) {
      ri[i] = rem / stride[i];
      rem %= stride[i];
    }
    for (int c = 0; c < D; ++c) {
      rem = c;
      for (int i = 0; i < n; ++i) {
        ci[i] = rem / stride[i];
        rem %= stride[i];
      }
      int rr = 0, cc = 0;
      for (int i = 0; i < n; ++i) {
        int a = ri[i], b = ci[i];
        if (flip[i]) std::swap(a, b);
        rr += a * stride[i];
        cc += b * stride[i];
      }
      out(rr, cc) = m(r, c);
    }
  }
  return out;
}

Mat partial_transpose(const DensityMatrix& rho, const std::vector<int>& part) {
  return partial_transpose_mat(rho.mat(), rho.dims(), part);
}

Mat permute_subsystems_mat(const Mat& m, const std::vector<int>& dims, const std::vector<int>& perm) {
  const int n = static_cast<int>(dims.size());
  if (static_cast<int>(perm.size()) != n)
    throw std::invalid_argument("permute_subsystems: perm size mismatch");
  check_index_set(perm, n, "permute_subsystems");

  std::vector<int> new_dims(n);
  for (int i = 0; i < n; ++i) new_dims[i] = dims[perm[i]];
  const std::vector<int> old_stride = strides_of(dims);
  const std::vector<int> new_stride = strides_of(new_dims);
  const int D = static_cast<int>(m.rows());

  // map old full index -> new full index
  std::vector<int> remap(D, 0);
  std::vector<int> xi(n);
  for (int idx = 0; idx < D; ++idx) {
    int rem = idx;
    for (int i = 0; i < n; ++i) {
      xi[i] = rem / old_stride[i];
      rem %= old_stride[i];
    }
    int out = 0;
    for (int i = 0; i < n; ++i) out += xi[perm[i]] * new_stride[i];
    remap[idx] = out;
  }
  Mat out(D, D);
  for (int r = 0; r < D; ++r)
    for (int c = 0; c < D; ++c) out(remap[r], remap[c]) = m(r, c);
  return out;
}

EigH eig_hermitian(const Mat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eig_hermitian: not square");
  if (max_abs_asymmetry(m) > 1e-10)
    throw std::invalid_argument("eig_hermitian: input not Hermitian within 1e-10");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint().eval()));
  if (es.info() != Eigen::Success) throw std::runtime_error("eig_hermitian: solver failed");
  const Eigen::Index d = m.rows();
  EigH out;
  out.values.resize(d);
  out.vectors.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {  // ascending -> descending
    out.values[i] = es.eigenvalues()[d - 1 - i];
    out.vectors.col(i) = es.eigenvectors().col(d - 1 - i);
  }
  return out;
}

double trace_norm(const Mat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("trace_norm: not square");
  if (m.rows() == 0) return 0.0;
  if (max_abs_asymmetry(m) <= 1e-12) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint().eval()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues().sum();
}

Mat clip_psd(const Mat& m) {
  EigH e = eig_hermitian(m);
  RVec vals = e.values;
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals[i] < 0.0) vals[i] = 0.0;
  return e.vectors * vals.asDiagonal() * e.vectors.adjoint();
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dims() != b.dims()) throw std::invalid_argument("fidelity: dims mismatch");
  EigH ea = eig_hermitian(a.mat());
  RVec sq = ea.values.cwiseMax(0.0).cwiseSqrt();
  Mat sqrt_a = ea.vectors * sq.asDiagonal() * ea.vectors.adjoint();
  Mat inner = sqrt_a * b.mat() * sqrt_a;
  EigH ei = eig_hermitian(0.5 * (inner + inner.adjoint().eval()));
  double s = ei.values.cwiseMax(0.0).cwiseSqrt().sum();
  return std::min(1.0, s * s);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dims() != b.dims()) throw std::invalid_argument("trace_distance: dims mismatch");
  return 0.5 * trace_norm(a.mat() - b.mat());
}

std::pair<double, double> fidelity_and_trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return {fidelity(a, b), trace_distance(a, b)};
}

Vec max_entangled_vec(int d) {
  if (d < 2) throw std::invalid_argument("max_entangled: d must be >= 2");
  Vec v = Vec::Zero(static_cast<Eigen::Index>(d) * d);
  const double a = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) v[i * d + i] = a;
  return v;
}

DensityMatrix max_entangled(int d) {
  return DensityMatrix::from_pure(max_entangled_vec(d), {d, d});
}

PureState purify(const DensityMatrix& rho) {
  if (rho.subsystems() != 1)
    throw std::invalid_argument("purify: expected a single-subsystem state");
  const int d = rho.dim();
  EigH e = eig_hermitian(rho.mat());
  Vec psi = Vec::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) {
    double lam = std::max(0.0, e.values[i]);
    if (lam < 1e-16) continue;
    double s = std::sqrt(lam);
    for (int j = 0; j < d; ++j) psi[i * d + j] += s * e.vectors(j, i);
  }
  psi /= psi.norm();
  return PureState(std::move(psi), {d, d});
}

}  // namespace entdist
