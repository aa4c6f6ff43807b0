#include "entdist/rains.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "entdist/entropy.hpp"

namespace entdist {

namespace {

constexpr double kBarrier = 1e-9;  // sigma <- (1-eps) sigma + eps I/d inside evaluations
constexpr double kLn2 = 0.6931471805599453;

Mat hermitize(const Mat& m) { return 0.5 * (m + m.adjoint().eval()); }

Mat proj_psd(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(m));
  RVec vals = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

// Euclidean projection of Hermitian eigenvalues onto the trace-norm ball
// {sum |lambda_i| <= 1}: soft-threshold of |lambda| by the waterfilling tau.
RVec l1_ball_project(const RVec& vals) {
  const Eigen::Index n = vals.size();
  double total = vals.cwiseAbs().sum();
  if (total <= 1.0) return vals;
  std::vector<double> u(n);
  for (Eigen::Index i = 0; i < n; ++i) u[i] = std::abs(vals[i]);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, tau = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cum += u[k];
    double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (k + 1 == n || u[k + 1] <= t) {
      tau = t;
      break;
    }
  }
  RVec out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double mag = std::max(0.0, std::abs(vals[i]) - tau);
    out[i] = vals[i] >= 0.0 ? mag : -mag;
  }
  return out;
}

Mat proj_tb_ball(const Mat& m, int da, int db) {
  std::vector<int> dims{da, db};
  Mat tb = partial_transpose_mat(hermitize(m), dims, {1});
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(tb));
  RVec vals = es.eigenvalues();
  if (vals.cwiseAbs().sum() <= 1.0) return hermitize(m);
  RVec clipped = l1_ball_project(vals);
  Mat back = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
  return partial_transpose_mat(hermitize(back), dims, {1});
}

struct Objective {
  Mat rho;
  int da = 0, db = 0;
  double c_rho = 0.0;  // sum lambda log2 lambda over the spectrum of rho

  explicit Objective(const Mat& r, int a, int b) : rho(r), da(a), db(b) {
    Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      double lam = es.eigenvalues()[i];
      if (lam > 1e-12) c_rho += lam * std::log2(lam);
    }
  }

  int dim() const { return da * db; }

  Mat regularized(const Mat& sigma) const {
    const int d = dim();
    return (1.0 - kBarrier) * sigma + (kBarrier / d) * Mat::Identity(d, d);
  }

  double value(const Mat& sigma) const {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(regularized(sigma)));
    const RVec& mu = es.eigenvalues();
    double tr_rho_log_sigma = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      double w = std::real(Complex(es.eigenvectors().col(i).adjoint() * rho *
                                   es.eigenvectors().col(i)));
      tr_rho_log_sigma += std::max(0.0, w) * std::log2(std::max(mu[i], 1e-300));
    }
    return c_rho - tr_rho_log_sigma;
  }

  // Gradient of value() in bits, via the Daleckii-Krein divided differences
  // of ln at the regularized point.
  Mat gradient(const Mat& sigma) const {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(regularized(sigma)));
    const RVec& mu = es.eigenvalues();
    const Mat& u = es.eigenvectors();
    Mat r = u.adjoint() * rho * u;
    const Eigen::Index n = mu.size();
    Mat g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        double mi = std::max(mu[i], 1e-300), mj = std::max(mu[j], 1e-300);
        double phi;
        if (std::abs(mi - mj) > 1e-13 * std::max(mi, mj))
          phi = (std::log(mi) - std::log(mj)) / (mi - mj);
        else
          phi = 1.0 / mi;
        g(i, j) = r(i, j) * phi;
      }
    }
    Mat grad = -(1.0 - kBarrier) / kLn2 * (u * g * u.adjoint());
    return hermitize(grad);
  }
};

double real_inner(const Mat& a, const Mat& b) { return (a.adjoint() * b).trace().real(); }

double sampled_gap(const Objective& obj, const Mat& sigma, const Mat& grad) {
  const int d = obj.dim();
  std::vector<Mat> candidates;
  candidates.push_back(Mat::Zero(d, d));
  candidates.push_back(project_pptprime(obj.rho, obj.da, obj.db));
  candidates.push_back(Mat::Identity(d, d) / static_cast<double>(d));
  Eigen::SelfAdjointEigenSolver<Mat> es(grad);
  for (int k = 0; k < std::min(3, d); ++k) {
    Vec v = es.eigenvectors().col(k);  // most negative gradient directions
    candidates.push_back(project_pptprime(v * v.adjoint(), obj.da, obj.db));
  }
  double gap = 0.0;
  for (const Mat& c : candidates) gap = std::max(gap, real_inner(grad, sigma - c));
  return gap;
}

}  // namespace

Mat project_pptprime(const Mat& sigma, int da, int db) {
  const int d = da * db;
  if (sigma.rows() != d || sigma.cols() != d)
    throw std::invalid_argument("project_pptprime: size mismatch");
  Mat x = hermitize(sigma);
  Mat p = Mat::Zero(d, d), q = Mat::Zero(d, d);
  Mat prev = x;
  for (int it = 0; it < 200; ++it) {
    Mat y = proj_psd(x + p);
    p = x + p - y;
    Mat z = proj_tb_ball(y + q, da, db);
    q = y + q - z;
    x = z;
    double move = (x - prev).norm();
    prev = x;
    if (move < 1e-12 * std::max(1.0, x.norm())) {
      Eigen::SelfAdjointEigenSolver<Mat> es(x, Eigen::EigenvaluesOnly);
      double tbn = trace_norm(partial_transpose_mat(x, {da, db}, {1}));
      if (es.eigenvalues().minCoeff() > -1e-10 && tbn <= 1.0 + 1e-10) break;
    }
  }
  return hermitize(x);
}

RainsResult rains_relative_entropy(const DensityMatrix& rho, int cut, const RainsOptions& opts,
                                   const std::optional<Mat>& init) {
  if (cut < 1 || cut >= rho.subsystems())
    throw std::invalid_argument("rains_relative_entropy: bad bipartition cut");
  if (rho.dim() > 16)
    throw std::invalid_argument("rains_relative_entropy: total dimension exceeds 16");
  int da = 1, db = 1;
  for (int i = 0; i < cut; ++i) da *= rho.dims()[i];
  for (int i = cut; i < rho.subsystems(); ++i) db *= rho.dims()[i];

  Objective obj(rho.mat(), da, db);
  Mat sigma = project_pptprime(init ? *init : rho.mat(), da, db);
  double fval = obj.value(sigma);

  int iters = 0;
  double t_prev = 1.0;
  double fp_tol = opts.fp_tol;
  bool stalled = false;

  for (int phase = 0; phase < 4 && !stalled; ++phase) {
    while (iters < opts.max_iter) {
      ++iters;
      Mat grad = obj.gradient(sigma);
      double t = std::min(1.0, 4.0 * t_prev);
      bool accepted = false;
      Mat cand;
      double f_new = fval;
      while (t > 1e-16) {
        cand = project_pptprime(sigma - t * grad, da, db);
        f_new = obj.value(cand);
        double descent = real_inner(grad, cand - sigma);
        if (f_new <= fval + 1e-4 * descent) {
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) {
        stalled = true;
        break;
      }
      t_prev = t;
      double move = (cand - sigma).norm();
      sigma = cand;
      fval = f_new;
      if (move <= fp_tol * std::max(1.0, sigma.norm())) break;
    }
    if (!opts.compute_gap) break;
    double gap = sampled_gap(obj, sigma, obj.gradient(sigma));
    if (gap <= opts.gap_target || iters >= opts.max_iter) break;
    fp_tol *= 1e-2;
  }

  RainsResult res;
  res.value = std::max(0.0, fval);
  res.minimizer = sigma;
  res.iterations = iters;
  res.gap_estimate = opts.compute_gap ? sampled_gap(obj, sigma, obj.gradient(sigma)) : -1.0;
  return res;
}

double rains_information_channel(const QuantumChannel& ch, const NelderMeadOptions& outer,
                                 const RainsOptions& polish) {
  if (ch.in_dim > 4)
    throw std::invalid_argument("rains_information_channel: in_dim > 4 unsupported");

  RainsOptions cheap = rains_exploration_options();
  auto factory = [&ch, &cheap]() {
    auto warm = std::make_shared<Mat>();
    return std::function<double(const Mat&)>([&ch, cheap, warm](const Mat& rho_in) {
      DensityMatrix out = channel_output_state(ch, rho_in);
      std::optional<Mat> init;
      if (warm->size() > 0) init = *warm;
      RainsResult r = rains_relative_entropy(out, 1, cheap, init);
      *warm = r.minimizer;
      return r.value;
    });
  };
  InputSearchResult search = maximize_over_inputs(ch.in_dim, factory, outer);

  // certify the best input (and the symmetric candidate) at full tolerance
  double best = 0.0;
  for (const Mat& input : {search.input, Mat(Mat::Identity(ch.in_dim, ch.in_dim) / ch.in_dim)}) {
    DensityMatrix out = channel_output_state(ch, input);
    RainsResult r = rains_relative_entropy(out, 1, polish);
    best = std::max(best, r.value);
  }
  return best;
}

}  // namespace entdist
