#include "entdist/entropy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace entdist {

namespace {

constexpr double kZeroEig = 1e-12;
constexpr double kSupportWeightTol = 1e-9;

double entropy_of_spectrum(const RVec& vals) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    double lam = vals[i];
    if (lam < kZeroEig) continue;  // clipped, 0 log 0 = 0
    s -= lam * std::log2(lam);
  }
  return s;
}

}  // namespace

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho.mat(), Eigen::EigenvaluesOnly);
  return entropy_of_spectrum(es.eigenvalues());
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binary_entropy: p out of [0,1]");
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dims() != sigma.dims()) throw std::invalid_argument("relative_entropy: dims mismatch");
  EigH er = eig_hermitian(rho.mat());
  double tr_rho_log_rho = 0.0;
  for (Eigen::Index i = 0; i < er.values.size(); ++i) {
    double lam = er.values[i];
    if (lam < kZeroEig) continue;
    tr_rho_log_rho += lam * std::log2(lam);
  }

  EigH es = eig_hermitian(sigma.mat());
  double tr_rho_log_sigma = 0.0;
  double null_weight = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    double mu = es.values[i];
    double w = std::real(Complex(es.vectors.col(i).adjoint() * rho.mat() * es.vectors.col(i)));
    w = std::max(0.0, w);
    if (mu < kZeroEig) {
      null_weight += w;
      continue;
    }
    tr_rho_log_sigma += w * std::log2(mu);
  }
  if (null_weight > kSupportWeightTol) return std::numeric_limits<double>::infinity();

  double d = tr_rho_log_rho - tr_rho_log_sigma;
  if (d < 0.0 && d > -1e-10) d = 0.0;
  return d;
}

double coherent_information_state(const DensityMatrix& rho_ab) {
  if (rho_ab.subsystems() != 2)
    throw std::invalid_argument("coherent_information_state: expected bipartite dims");
  DensityMatrix rho_b = partial_trace(rho_ab, {1});
  return von_neumann_entropy(rho_b) - von_neumann_entropy(rho_ab);
}

DensityMatrix channel_output_state(const QuantumChannel& ch, const Mat& rho_in) {
  const int d = ch.in_dim;
  Mat clipped = clip_psd(0.5 * (rho_in + rho_in.adjoint().eval()));
  double tr = clipped.trace().real();
  if (tr < 1e-14)
    clipped = Mat::Identity(d, d) / static_cast<double>(d);
  else
    clipped /= tr;
  DensityMatrix rho(clipped, {d});
  PureState psi = purify(rho);
  DensityMatrix joint = DensityMatrix::from_pure(psi.amps(), psi.dims());
  return apply(ch, joint, 1);
}

namespace {

double channel_information(const QuantumChannel& ch, const NelderMeadOptions& opts, bool reverse) {
  if (ch.in_dim > 8) throw std::invalid_argument("channel information: in_dim > 8 unsupported");
  auto factory = [&ch, reverse]() {
    return std::function<double(const Mat&)>([&ch, reverse](const Mat& rho_in) {
      DensityMatrix out = channel_output_state(ch, rho_in);
      double s_ab = von_neumann_entropy(out);
      if (reverse) {
        DensityMatrix a = partial_trace(out, {0});
        return von_neumann_entropy(a) - s_ab;
      }
      DensityMatrix b = partial_trace(out, {1});
      return von_neumann_entropy(b) - s_ab;
    });
  };
  InputSearchResult res = maximize_over_inputs(ch.in_dim, factory, opts);
  return res.value;
}

}  // namespace

double coherent_information_channel(const QuantumChannel& ch, const NelderMeadOptions& opts) {
  return channel_information(ch, opts, false);
}

double reverse_coherent_information_channel(const QuantumChannel& ch, const NelderMeadOptions& opts) {
  return channel_information(ch, opts, true);
}

}  // namespace entdist
