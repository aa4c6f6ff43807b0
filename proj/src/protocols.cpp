#include "entdist/protocols.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include "entdist/entropy.hpp"
#include "entdist/optimize.hpp"
#include "entdist/rains.hpp"

namespace entdist {

namespace {

double log2d(int d) { return std::log2(static_cast<double>(d)); }

void require_prob_arg(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " out of [0,1]");
}

double entropy_mat(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double lam = es.eigenvalues()[i];
    if (lam > 1e-12) s -= lam * std::log2(lam);
  }
  return s;
}

}  // namespace

double erasure_capacity(double p1, double p2, int d) {
  require_prob_arg(p1, "p1");
  require_prob_arg(p2, "p2");
  if (d < 2) throw std::invalid_argument("erasure_capacity: d must be >= 2");
  return (1.0 - p1) * (1.0 - p2) * log2d(d);
}

std::optional<double> dephasing_ghz_capacity(double p, const std::vector<double>& other_q_lower_bounds) {
  if (!(p >= 0.0 && p <= 0.5))
    throw std::invalid_argument("dephasing_ghz_capacity: p out of [0, 1/2]");
  double v = 1.0 - binary_entropy(p);
  for (double q : other_q_lower_bounds)
    if (q < v - 1e-9) return std::nullopt;
  return v;
}

double composition_lower_bound(double q1, double ecpp1, double q2, double ecpp2) {
  if (q1 < 0 || q2 < 0 || ecpp1 < 0 || ecpp2 < 0)
    throw std::invalid_argument("composition_lower_bound: negative rate");
  if (ecpp1 < q1 - 1e-12 || ecpp2 < q2 - 1e-12)
    throw std::invalid_argument("composition_lower_bound: Ecpp below Q is inconsistent");
  return std::max(std::min(q1, ecpp2), std::min(q2, ecpp1));
}

ChannelQuantities channel_quantities(const ChannelParams& cp) {
  ChannelQuantities q;
  switch (cp.kind) {
    case ChannelKind::Identity:
      q.ic = q.ir = q.rains = log2d(cp.d);
      q.closed_form = true;
      return q;
    case ChannelKind::Dephasing:
      q.ic = q.ir = q.rains = 1.0 - binary_entropy(cp.p);
      q.closed_form = true;
      return q;
    case ChannelKind::Erasure:
      q.ic = std::max(0.0, 1.0 - 2.0 * cp.p) * log2d(cp.d);
      q.ir = (1.0 - cp.p) * log2d(cp.d);
      q.rains = (1.0 - cp.p) * log2d(cp.d);
      q.closed_form = true;
      return q;
    case ChannelKind::Gadc:
    case ChannelKind::Pauli: {
      QuantumChannel ch = make_channel(cp);
      q.ic = coherent_information_channel(ch);
      q.ir = reverse_coherent_information_channel(ch);
      q.rains = rains_information_channel(ch);
      q.closed_form = false;
      return q;
    }
  }
  throw std::logic_error("channel_quantities: unreachable");
}

ChannelRates rates_from_quantities(const ChannelParams& cp, const ChannelQuantities& q) {
  ChannelRates r;
  r.q_lower = std::max(0.0, q.ic);
  r.ecpp_lower = std::max({r.q_lower, q.ir, 0.0});
  r.rains_upper = q.rains;
  if (q.closed_form) {
    r.q_source = r.ecpp_source = r.rains_source = "closed-form";
  } else {
    r.q_source = "ic-optimizer";
    r.ecpp_source = q.ir >= r.q_lower ? "ir-optimizer" : "ic-optimizer";
    r.rains_source = "rains-solver";
  }
  return r;
}

ChannelRates channel_rate_estimates(const ChannelParams& cp) {
  return rates_from_quantities(cp, channel_quantities(cp));
}

// --- multi-rail -------------------------------------------------------------

namespace {

// Single-qubit channel superoperator elements s[a'][b'][a][b] =
// sum_i K_i(a',a) conj(K_i(b',b)).
std::array<std::array<std::array<std::array<Complex, 2>, 2>, 2>, 2> superop_elements(
    const QuantumChannel& ch) {
  std::array<std::array<std::array<std::array<Complex, 2>, 2>, 2>, 2> s{};
  for (int ap = 0; ap < 2; ++ap)
    for (int bp = 0; bp < 2; ++bp)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          Complex acc(0, 0);
          for (const Mat& k : ch.kraus) acc += k(ap, a) * std::conj(k(bp, b));
          s[ap][bp][a][b] = acc;
        }
  return s;
}

// Compressed weight-1-sector transfer coefficient for one k-rail side:
// <e_jp| E(|e_j><e_l|) |e_lp> for a product of k identical single-qubit uses.
struct SectorTransfer {
  int k;
  std::array<std::array<std::array<std::array<Complex, 2>, 2>, 2>, 2> s;

  Complex coeff(int j, int l, int jp, int lp) const {
    Complex c(1, 0);
    for (int r = 0; r < k; ++r) {
      int a = (r == j) ? 1 : 0;
      int b = (r == l) ? 1 : 0;
      int ap = (r == jp) ? 1 : 0;
      int bp = (r == lp) ? 1 : 0;
      c *= s[ap][bp][a][b];
      if (c == Complex(0, 0)) return c;
    }
    return c;
  }
};

}  // namespace

double multirail_rate(double gamma1, double gamma2, double t1, double t2, int k) {
  if (k < 2 || k > 6) throw std::invalid_argument("multirail_rate: k out of [2,6]");
  require_prob_arg(gamma1, "gamma1");
  require_prob_arg(gamma2, "gamma2");
  require_prob_arg(t1, "T1");
  require_prob_arg(t2, "T2");

  ChannelParams cp1{ChannelKind::Gadc};
  cp1.gamma = gamma1;
  cp1.T = t1;
  ChannelParams cp2{ChannelKind::Gadc};
  cp2.gamma = gamma2;
  cp2.T = t2;
  SectorTransfer e1{k, superop_elements(make_channel(cp1))};
  SectorTransfer e2{k, superop_elements(make_channel(cp2))};

  // block[(j1',j2'),(l1',l2')] = (1/k) sum_{j,l} c1(j,l,j1',l1') c2(j,l,j2',l2')
  const int kk = k * k;
  Mat block = Mat::Zero(kk, kk);
  for (int j = 0; j < k; ++j)
    for (int l = 0; l < k; ++l)
      for (int j1 = 0; j1 < k; ++j1)
        for (int l1 = 0; l1 < k; ++l1) {
          Complex c1 = e1.coeff(j, l, j1, l1);
          if (c1 == Complex(0, 0)) continue;
          for (int j2 = 0; j2 < k; ++j2)
            for (int l2 = 0; l2 < k; ++l2) {
              Complex c2 = e2.coeff(j, l, j2, l2);
              if (c2 == Complex(0, 0)) continue;
              block(j1 * k + j2, l1 * k + l2) += c1 * c2 / static_cast<double>(k);
            }
        }

  double q = block.trace().real();
  if (q < 1e-300) return 0.0;
  Mat post = block / q;
  post = 0.5 * (post + post.adjoint().eval());
  DensityMatrix rho(post, {k, k});
  double ic_ab = coherent_information_state(rho);
  Mat a_marg = partial_trace_mat(post, {k, k}, {0});
  double ic_ba = entropy_mat(a_marg) - von_neumann_entropy(rho);
  double hashing = std::max({ic_ab, ic_ba, 0.0});
  return q * hashing / static_cast<double>(k);
}

std::pair<double, int> best_multirail_rate(double gamma1, double gamma2, double t1, double t2) {
  double best = -1.0;
  int best_k = 2;
  for (int k = 2; k <= 6; ++k) {
    double r = multirail_rate(gamma1, gamma2, t1, t2, k);
    if (r > best) {
      best = r;
      best_k = k;
    }
  }
  return {best, best_k};
}

// --- assisted distillation search -------------------------------------------

namespace {

struct AssistedProblem {
  Mat rho_perm;  // subsystem order [S1, S2, A1, A2]
  int da1 = 0, da2 = 0;

  int helper_dim() const { return 4; }
  int out_dim() const { return da1 * da2; }

  // score of a projective rank-1 measurement given by the columns of u
  double score(const Mat& u) const {
    const int ds = helper_dim();
    const int dA = out_dim();
    double total = 0.0;
    for (int m = 0; m < ds; ++m) {
      Mat tau = Mat::Zero(dA, dA);
      for (int s = 0; s < ds; ++s) {
        Complex us = std::conj(u(s, m));
        if (std::norm(us) < 1e-28) continue;
        for (int sp = 0; sp < ds; ++sp) {
          Complex c = us * u(sp, m);
          if (std::norm(c) < 1e-28) continue;
          tau += c * rho_perm.block(static_cast<Eigen::Index>(s) * dA,
                                    static_cast<Eigen::Index>(sp) * dA, dA, dA);
        }
      }
      tau = 0.5 * (tau + tau.adjoint().eval());
      double p = tau.trace().real();
      if (p < 1e-12) continue;
      Mat sig = tau / p;
      double s_ab = entropy_mat(sig);
      double s_a1 = entropy_mat(partial_trace_mat(sig, {da1, da2}, {0}));
      double s_a2 = entropy_mat(partial_trace_mat(sig, {da1, da2}, {1}));
      double ic = std::max({s_a2 - s_ab, s_a1 - s_ab, 0.0});
      total += p * ic;
    }
    return total;
  }
};

Mat bell_basis4() {
  Mat u = Mat::Zero(4, 4);
  const double r = 1.0 / std::sqrt(2.0);
  u(0, 0) = r; u(3, 0) = r;    // (|00> + |11>)/sqrt(2)
  u(0, 1) = r; u(3, 1) = -r;   // (|00> - |11>)/sqrt(2)
  u(1, 2) = r; u(2, 2) = r;    // (|01> + |10>)/sqrt(2)
  u(1, 3) = r; u(2, 3) = -r;   // (|01> - |10>)/sqrt(2)
  return u;
}

Mat haar_unitary4(uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Mat> qr(g);
  return qr.householderQ() * Mat::Identity(4, 4);
}

// Right-multiply u by a Givens-style rotation on columns (j, k);
// kind 0 mixes with phase i (X-type generator), kind 1 is a real rotation.
void rotate_columns(Mat& u, int j, int k, double theta, int kind) {
  Vec cj = u.col(j), ck = u.col(k);
  double c = std::cos(theta), s = std::sin(theta);
  if (kind == 0) {
    u.col(j) = c * cj + Complex(0, 1) * s * ck;
    u.col(k) = Complex(0, 1) * s * cj + c * ck;
  } else {
    u.col(j) = c * cj - s * ck;
    u.col(k) = s * cj + c * ck;
  }
}

// Coordinate-wise unitary refinement: step 0.1, halved after a full failed
// cycle, 200 step budget.
double refine_basis(const AssistedProblem& prob, Mat& u, double start_value) {
  struct Coord { int j, k, kind; };
  std::vector<Coord> coords;
  for (int j = 0; j < 4; ++j)
    for (int k = j + 1; k < 4; ++k) {
      coords.push_back({j, k, 0});
      coords.push_back({j, k, 1});
    }
  double best = start_value;
  double step = 0.1;
  int fails = 0;
  for (int it = 0; it < 200 && step >= 1e-4; ++it) {
    const Coord& c = coords[it % coords.size()];
    bool improved = false;
    for (double sgn : {1.0, -1.0}) {
      Mat cand = u;
      rotate_columns(cand, c.j, c.k, sgn * step, c.kind);
      double v = prob.score(cand);
      if (v > best + 1e-12) {
        best = v;
        u = cand;
        improved = true;
        break;
      }
    }
    if (improved) {
      fails = 0;
    } else if (++fails >= static_cast<int>(coords.size())) {
      step *= 0.5;
      fails = 0;
    }
  }
  return best;
}

}  // namespace

double assisted_distillation_lower_bound(const QuantumChannel& ch1, const QuantumChannel& ch2,
                                         int n_measurements, uint64_t seed) {
  if (ch1.in_dim > 2 || ch2.in_dim > 2)
    throw std::invalid_argument("assisted_distillation_lower_bound: input dims above 2 unsupported");
  if (n_measurements < 1)
    throw std::invalid_argument("assisted_distillation_lower_bound: n_measurements must be >= 1");

  DensityMatrix joint = tensor(choi_state(ch1), choi_state(ch2));  // [S1, A1, S2, A2]
  AssistedProblem prob;
  prob.da1 = ch1.out_dim;
  prob.da2 = ch2.out_dim;
  prob.rho_perm = permute_subsystems_mat(joint.mat(), joint.dims(), {0, 2, 1, 3});

  std::vector<double> values(n_measurements, 0.0);
  parallel_for(n_measurements, [&](int i) {
    Mat u = (i == 0) ? bell_basis4() : haar_unitary4(derive_seed(seed, static_cast<uint64_t>(i)));
    double v = prob.score(u);
    values[i] = refine_basis(prob, u, v);
  });
  double best = 0.0;
  for (double v : values) best = std::max(best, v);
  return best;
}

// --- pairwise and multipartite bounds ----------------------------------------

namespace {

// Exact-pair short circuits; nullopt when no closed form applies.
std::optional<BoundInterval> exact_pair(const ChannelParams& c1, const ChannelParams& c2) {
  if (c1.kind == ChannelKind::Erasure && c2.kind == ChannelKind::Erasure && c1.d == c2.d) {
    double v = erasure_capacity(c1.p, c2.p, c1.d);
    return BoundInterval{v, v, "erasure-theorem", "erasure-theorem"};
  }
  if (c1.kind == ChannelKind::Dephasing && c2.kind == ChannelKind::Dephasing) {
    double v = 1.0 - std::max(binary_entropy(c1.p), binary_entropy(c2.p));
    return BoundInterval{v, v, "dephasing-proposition", "dephasing-proposition"};
  }
  return std::nullopt;
}

}  // namespace

BoundInterval epr_bounds_with_rates(const ChannelParams& c1, const ChannelParams& c2,
                                    const ChannelRates& r1, const ChannelRates& r2) {
  if (auto exact = exact_pair(c1, c2)) return *exact;
  BoundInterval bi;
  bi.lower = composition_lower_bound(r1.q_lower, r1.ecpp_lower, r2.q_lower, r2.ecpp_lower);
  bi.lower_source = "composition";

  if (c1.kind == ChannelKind::Gadc && c2.kind == ChannelKind::Gadc) {
    auto [mr, k] = best_multirail_rate(c1.gamma, c2.gamma, c1.T, c2.T);
    if (mr > bi.lower) {
      bi.lower = mr;
      bi.lower_source = "multirail(k=" + std::to_string(k) + ")";
    }
  }

  QuantumChannel ch1 = make_channel(c1), ch2 = make_channel(c2);
  if (ch1.in_dim == 2 && ch2.in_dim == 2) {
    TeleportCovariance cov1 = teleportation_covariance(ch1);
    if (cov1.covariant && teleportation_covariance(ch2).covariant) {
      double av = assisted_distillation_lower_bound(ch1, ch2, 48, 0x5eedf00dull);
      if (av > bi.lower) {
        bi.lower = av;
        bi.lower_source = "assisted-search";
      }
    }
  }

  if (r1.rains_upper <= r2.rains_upper) {
    bi.upper = r1.rains_upper;
    bi.upper_source = r1.rains_source + "[" + c1.to_string() + "]";
  } else {
    bi.upper = r2.rains_upper;
    bi.upper_source = r2.rains_source + "[" + c2.to_string() + "]";
  }
  return bi;
}

BoundInterval epr_bounds(const ChannelParams& c1, const ChannelParams& c2) {
  if (auto exact = exact_pair(c1, c2)) return *exact;
  ChannelRates r1 = channel_rate_estimates(c1);
  ChannelRates r2 = channel_rate_estimates(c2);
  return epr_bounds_with_rates(c1, c2, r1, r2);
}

BoundInterval ghz_bounds(const std::vector<ChannelParams>& channels) {
  const int n = static_cast<int>(channels.size());
  if (n < 3) throw std::invalid_argument("ghz_bounds: need at least 3 channels");
  for (const auto& cp : channels)
    if (make_channel(cp).in_dim != 2)
      throw std::invalid_argument("ghz_bounds: restricted to qubit channels");

  std::vector<ChannelRates> rates(n);
  for (int i = 0; i < n; ++i) rates[i] = channel_rate_estimates(channels[i]);

  double min_q = rates[0].q_lower;
  for (int i = 1; i < n; ++i) min_q = std::min(min_q, rates[i].q_lower);

  double min_pair = -1.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      BoundInterval bij = epr_bounds_with_rates(channels[i], channels[j], rates[i], rates[j]);
      if (min_pair < 0.0 || bij.lower < min_pair) min_pair = bij.lower;
    }
  double pair_rate = static_cast<double>(n) / (2.0 * (n - 1)) * min_pair;

  BoundInterval bi;
  if (min_q >= pair_rate) {
    bi.lower = min_q;
    bi.lower_source = "min-quantum-capacity";
  } else {
    bi.lower = pair_rate;
    bi.lower_source = "pairwise-epr";
  }

  int argmin = 0;
  for (int i = 1; i < n; ++i)
    if (rates[i].rains_upper < rates[argmin].rains_upper) argmin = i;
  bi.upper = rates[argmin].rains_upper;
  bi.upper_source = rates[argmin].rains_source + "[" + channels[argmin].to_string() + "]";
  return bi;
}

}  // namespace entdist
