#include "entdist/channels.hpp"

#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace entdist {

namespace {

constexpr int kMaxChannelDim = 8;

void require_prob(double v, const std::string& name) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument("channel parameter " + name + " out of [0,1]");
}

double parse_double(const std::string& tok) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("channel spec: bad numeric value '" + tok + "'");
  }
  if (pos != tok.size())
    throw std::invalid_argument("channel spec: bad numeric value '" + tok + "'");
  return v;
}

std::string trim_zeros(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

ChannelParams ChannelParams::parse(const std::string& spec) {
  auto colon = spec.find(':');
  std::string kind_s = spec.substr(0, colon);
  std::map<std::string, std::string> kv;
  if (colon != std::string::npos) {
    std::string rest = spec.substr(colon + 1);
    if (rest.empty()) throw std::invalid_argument("channel spec: empty parameter list in '" + spec + "'");
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
        throw std::invalid_argument("channel spec: bad key=value token '" + item + "'");
      std::string key = item.substr(0, eq);
      if (kv.count(key)) throw std::invalid_argument("channel spec: duplicate key '" + key + "'");
      kv[key] = item.substr(eq + 1);
    }
  }

  auto take = [&kv, &spec](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end())
      throw std::invalid_argument("channel spec: missing key '" + key + "' in '" + spec + "'");
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto take_opt = [&kv](const std::string& key, std::optional<std::string>& out) {
    auto it = kv.find(key);
    if (it != kv.end()) {
      out = it->second;
      kv.erase(it);
    }
  };

  ChannelParams cp;
  if (kind_s == "erasure") {
    cp.kind = ChannelKind::Erasure;
    cp.p = parse_double(take("p"));
    std::optional<std::string> ds;
    take_opt("d", ds);
    cp.d = ds ? static_cast<int>(parse_double(*ds)) : 2;
  } else if (kind_s == "dephasing") {
    cp.kind = ChannelKind::Dephasing;
    cp.p = parse_double(take("p"));
    cp.d = 2;
  } else if (kind_s == "gadc") {
    cp.kind = ChannelKind::Gadc;
    cp.gamma = parse_double(take("gamma"));
    cp.T = parse_double(take("T"));
    cp.d = 2;
  } else if (kind_s == "pauli") {
    cp.kind = ChannelKind::Pauli;
    cp.px = parse_double(take("px"));
    cp.py = parse_double(take("py"));
    cp.pz = parse_double(take("pz"));
    cp.d = 2;
  } else if (kind_s == "identity") {
    cp.kind = ChannelKind::Identity;
    std::optional<std::string> ds;
    take_opt("d", ds);
    cp.d = ds ? static_cast<int>(parse_double(*ds)) : 2;
  } else {
    throw std::invalid_argument("channel spec: unknown kind '" + kind_s + "'");
  }
  if (!kv.empty())
    throw std::invalid_argument("channel spec: unexpected key '" + kv.begin()->first + "' in '" +
                                spec + "'");

  // range validation (shared with make_channel)
  switch (cp.kind) {
    case ChannelKind::Erasure:
      require_prob(cp.p, "p");
      if (cp.d < 2 || cp.d > kMaxChannelDim)
        throw std::invalid_argument("erasure: d must be in [2,8]");
      break;
    case ChannelKind::Dephasing:
      require_prob(cp.p, "p");
      break;
    case ChannelKind::Gadc:
      require_prob(cp.gamma, "gamma");
      require_prob(cp.T, "T");
      break;
    case ChannelKind::Pauli:
      require_prob(cp.px, "px");
      require_prob(cp.py, "py");
      require_prob(cp.pz, "pz");
      if (cp.px + cp.py + cp.pz > 1.0 + 1e-12)
        throw std::invalid_argument("pauli: px+py+pz exceeds 1");
      break;
    case ChannelKind::Identity:
      if (cp.d < 2 || cp.d > kMaxChannelDim)
        throw std::invalid_argument("identity: d must be in [2,8]");
      break;
  }
  return cp;
}

std::string ChannelParams::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case ChannelKind::Erasure:
      os << "erasure:p=" << trim_zeros(p) << ",d=" << d;
      break;
    case ChannelKind::Dephasing:
      os << "dephasing:p=" << trim_zeros(p);
      break;
    case ChannelKind::Gadc:
      os << "gadc:gamma=" << trim_zeros(gamma) << ",T=" << trim_zeros(T);
      break;
    case ChannelKind::Pauli:
      os << "pauli:px=" << trim_zeros(px) << ",py=" << trim_zeros(py) << ",pz=" << trim_zeros(pz);
      break;
    case ChannelKind::Identity:
      os << "identity:d=" << d;
      break;
  }
  return os.str();
}

Mat pauli_shift(int d) {
  Mat x = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) x((k + 1) % d, k) = 1.0;
  return x;
}

Mat pauli_clock(int d) {
  Mat z = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) z(k, k) = std::polar(1.0, 2.0 * M_PI * k / d);
  return z;
}

Mat generalized_pauli(int d, int a, int b) {
  Mat m = Mat::Identity(d, d);
  Mat x = pauli_shift(d), z = pauli_clock(d);
  for (int i = 0; i < a; ++i) m = x * m;
  Mat zb = Mat::Identity(d, d);
  for (int i = 0; i < b; ++i) zb = z * zb;
  return m * zb;
}

QuantumChannel make_channel(const ChannelParams& cp) {
  QuantumChannel ch;
  ch.label = cp.to_string();
  switch (cp.kind) {
    case ChannelKind::Identity: {
      ch.in_dim = ch.out_dim = cp.d;
      ch.kraus = {Mat::Identity(cp.d, cp.d)};
      break;
    }
    case ChannelKind::Dephasing: {
      require_prob(cp.p, "p");
      ch.in_dim = ch.out_dim = 2;
      Mat z = Mat::Identity(2, 2);
      z(1, 1) = -1.0;
      ch.kraus = {std::sqrt(1.0 - cp.p) * Mat::Identity(2, 2), std::sqrt(cp.p) * z};
      break;
    }
    case ChannelKind::Erasure: {
      require_prob(cp.p, "p");
      if (cp.d < 2 || cp.d > kMaxChannelDim)
        throw std::invalid_argument("erasure: d out of range");
      const int d = cp.d;
      ch.in_dim = d;
      ch.out_dim = d + 1;  // flag state is the last basis index
      Mat embed = Mat::Zero(d + 1, d);
      embed.topRows(d) = Mat::Identity(d, d);
      ch.kraus.push_back(std::sqrt(1.0 - cp.p) * embed);
      for (int j = 0; j < d; ++j) {
        Mat k = Mat::Zero(d + 1, d);
        k(d, j) = std::sqrt(cp.p);
        ch.kraus.push_back(k);
      }
      break;
    }
    case ChannelKind::Gadc: {
      require_prob(cp.gamma, "gamma");
      require_prob(cp.T, "T");
      ch.in_dim = ch.out_dim = 2;
      const double g = cp.gamma, t = cp.T;
      Mat k1 = Mat::Zero(2, 2), k2 = Mat::Zero(2, 2), k3 = Mat::Zero(2, 2), k4 = Mat::Zero(2, 2);
      k1(0, 0) = std::sqrt(1.0 - t);
      k1(1, 1) = std::sqrt(1.0 - t) * std::sqrt(1.0 - g);
      k2(0, 1) = std::sqrt(g * (1.0 - t));
      k3(0, 0) = std::sqrt(t) * std::sqrt(1.0 - g);
      k3(1, 1) = std::sqrt(t);
      k4(1, 0) = std::sqrt(g * t);
      ch.kraus = {k1, k2, k3, k4};
      break;
    }
    case ChannelKind::Pauli: {
      require_prob(cp.px, "px");
      require_prob(cp.py, "py");
      require_prob(cp.pz, "pz");
      double p0 = 1.0 - cp.px - cp.py - cp.pz;
      if (p0 < -1e-12) throw std::invalid_argument("pauli: px+py+pz exceeds 1");
      p0 = std::max(0.0, p0);
      ch.in_dim = ch.out_dim = 2;
      Mat x = pauli_shift(2), z = pauli_clock(2).real().cast<Complex>();
      Mat y = Complex(0, 1) * x * z;
      ch.kraus = {std::sqrt(p0) * Mat::Identity(2, 2), std::sqrt(cp.px) * x, std::sqrt(cp.py) * y,
                  std::sqrt(cp.pz) * z};
      break;
    }
  }
  // completeness sanity
  Mat comp = Mat::Zero(ch.in_dim, ch.in_dim);
  for (const Mat& k : ch.kraus) comp += k.adjoint() * k;
  if ((comp - Mat::Identity(ch.in_dim, ch.in_dim)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::logic_error("make_channel: Kraus completeness violated");
  return ch;
}

DensityMatrix apply(const QuantumChannel& ch, const DensityMatrix& rho, int subsystem) {
  const auto& dims = rho.dims();
  if (subsystem < 0 || subsystem >= rho.subsystems())
    throw std::invalid_argument("apply: subsystem index out of range");
  if (dims[subsystem] != ch.in_dim)
    throw std::invalid_argument("apply: subsystem dimension does not match channel input");

  int before = 1, after = 1;
  for (int i = 0; i < subsystem; ++i) before *= dims[i];
  for (int i = subsystem + 1; i < rho.subsystems(); ++i) after *= dims[i];

  std::vector<int> new_dims = dims;
  new_dims[subsystem] = ch.out_dim;
  const int out_total = before * ch.out_dim * after;

  Mat acc = Mat::Zero(out_total, out_total);
  Mat ib = Mat::Identity(before, before), ia = Mat::Identity(after, after);
  for (const Mat& k : ch.kraus) {
    if (k.cwiseAbs().maxCoeff() == 0.0) continue;
    Mat op = kron(kron(ib, k), ia);
    acc += op * rho.mat() * op.adjoint();
  }
  Mat h = 0.5 * (acc + acc.adjoint().eval());
  return DensityMatrix(std::move(h), std::move(new_dims));
}

DensityMatrix choi_state(const QuantumChannel& ch) {
  DensityMatrix phi = max_entangled(ch.in_dim);
  return apply(ch, phi, 1);
}

namespace {

// Fixed probe set used by the covariance decision procedure.
std::vector<Mat> covariance_probes(int d) {
  std::mt19937_64 rng(0x9d2c5680u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Mat> probes;
  for (int t = 0; t < 20; ++t) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = Complex(gauss(rng), gauss(rng));
    v /= v.norm();
    probes.push_back(v * v.adjoint());
  }
  return probes;
}

Mat closest_unitary(const Mat& w) {
  Eigen::JacobiSVD<Mat> svd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace

TeleportCovariance teleportation_covariance(const QuantumChannel& ch) {
  const int d = ch.in_dim;
  const int dout = ch.out_dim;
  if (dout != d && dout != d + 1)
    throw std::invalid_argument("teleportation_covariance: output must equal input or be flag-extended");

  TeleportCovariance result;
  result.d = d;
  std::vector<Mat> probes = covariance_probes(d);
  std::vector<DensityMatrix> probe_states;
  probe_states.reserve(probes.size());
  for (const Mat& p : probes) probe_states.emplace_back(p, std::vector<int>{d});

  std::vector<Mat> outs;
  outs.reserve(probes.size());
  for (const auto& ps : probe_states) outs.push_back(apply(ch, ps, 0).mat());

  std::mt19937_64 combo_rng(0x2545f491u);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      Mat u = generalized_pauli(d, a, b);
      std::vector<Mat> rotated;
      rotated.reserve(probes.size());
      for (std::size_t t = 0; t < probes.size(); ++t) {
        Mat r = u * probes[t] * u.adjoint();
        rotated.push_back(apply(ch, DensityMatrix(0.5 * (r + r.adjoint().eval()), {d}), 0).mat());
      }

      // Stack the linear constraints V*A_t - B_t*V = 0 and look for a
      // unitary in the (near-)null space.
      const int n2 = dout * dout;
      Mat l(static_cast<int>(probes.size()) * n2, n2);
      Mat iout = Mat::Identity(dout, dout);
      for (std::size_t t = 0; t < probes.size(); ++t) {
        Mat lt = kron(outs[t].transpose(), iout) - kron(iout, rotated[t]);
        l.block(static_cast<int>(t) * n2, 0, n2, n2) = lt;
      }
      Eigen::JacobiSVD<Mat> svd(l, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      const double smax = sv[0];
      // gather near-null directions
      std::vector<int> null_idx;
      for (int i = n2 - 1; i >= 0; --i) {
        if (sv[i] <= std::max(1e-9, 1e-9 * smax))
          null_idx.push_back(i);
        else
          break;
      }
      if (null_idx.empty()) null_idx.push_back(n2 - 1);

      auto try_candidate = [&](const Mat& w) -> std::optional<Mat> {
        Mat v = closest_unitary(w);
        double worst = 0.0;
        for (std::size_t t = 0; t < probes.size(); ++t) {
          double dist = 0.5 * trace_norm(v * outs[t] * v.adjoint() - rotated[t]);
          worst = std::max(worst, dist);
          if (worst > 1e-8) return std::nullopt;
        }
        return v;
      };

      std::optional<Mat> found;
      // single bottom vector first, then random combinations of the near-null space
      for (int attempt = 0; attempt < 10 && !found; ++attempt) {
        Vec coef = Vec::Zero(static_cast<int>(null_idx.size()));
        if (attempt == 0)
          coef[0] = 1.0;
        else
          for (int i = 0; i < coef.size(); ++i) coef[i] = Complex(gauss(combo_rng), gauss(combo_rng));
        Vec w = Vec::Zero(n2);
        for (int i = 0; i < coef.size(); ++i) w += coef[i] * svd.matrixV().col(null_idx[i]);
        Mat wm(dout, dout);
        for (int c = 0; c < dout; ++c) wm.col(c) = w.segment(static_cast<Eigen::Index>(c) * dout, dout);
        found = try_candidate(wm);
        if (null_idx.size() == 1 && attempt == 0) break;
      }
      if (!found) {
        result.covariant = false;
        result.corrections.clear();
        return result;
      }
      result.corrections.push_back(*found);
    }
  }
  result.covariant = true;
  return result;
}

bool is_teleportation_covariant(const QuantumChannel& ch) {
  return teleportation_covariance(ch).covariant;
}

std::vector<TeleportOutcome> teleport_outcomes(const QuantumChannel& ch, const DensityMatrix& rho,
                                               const TeleportCovariance& cov) {
  if (!cov.covariant) throw std::invalid_argument("simulate_via_choi: channel is not teleportation-covariant");
  const int d = ch.in_dim;
  if (rho.subsystems() != 1 || rho.dim() != d)
    throw std::invalid_argument("simulate_via_choi: input must be a single system matching in_dim");

  DensityMatrix j = choi_state(ch);
  const int dout = ch.out_dim;
  // joint state rho^{A'} (x) J^{S B}, subsystems [A', S, B]
  Mat joint = kron(rho.mat(), j.mat());

  std::vector<TeleportOutcome> outcomes;
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      Mat u = generalized_pauli(d, a, b);
      // measurement vector (U_ab (x) I_S)|phi> on A'S: m[(r,i)] = U(r,i)/sqrt(d)
      Vec m = Vec::Zero(static_cast<Eigen::Index>(d) * d);
      for (int i = 0; i < d; ++i)
        for (int r = 0; r < d; ++r) m[r * d + i] = u(r, i) / std::sqrt(static_cast<double>(d));

      // omega[x,y] = sum_{s,s'} conj(m[s]) m[s'] joint[(s,x),(s',y)]
      Mat omega = Mat::Zero(dout, dout);
      for (int s = 0; s < d * d; ++s) {
        if (std::norm(m[s]) < 1e-30) continue;
        for (int sp = 0; sp < d * d; ++sp) {
          if (std::norm(m[sp]) < 1e-30) continue;
          Complex c = std::conj(m[s]) * m[sp];
          omega += c * joint.block(static_cast<Eigen::Index>(s) * dout,
                                   static_cast<Eigen::Index>(sp) * dout, dout, dout);
        }
      }
      // outcome (a,b) implements N(U_ab^dag rho U_ab); the effective Pauli is
      // X^{-a} Z^{-b} up to phase, so correct with that entry's V.
      int ia = (d - a) % d, ib2 = (d - b) % d;
      const Mat& v = cov.corrections[ia * d + ib2];
      Mat corrected = v.adjoint() * omega * v;
      TeleportOutcome oc;
      oc.prob = corrected.trace().real();
      oc.corrected = 0.5 * (corrected + corrected.adjoint().eval());
      outcomes.push_back(std::move(oc));
    }
  }
  return outcomes;
}

DensityMatrix simulate_via_choi(const QuantumChannel& ch, const DensityMatrix& rho,
                                const TeleportCovariance& cov) {
  auto outcomes = teleport_outcomes(ch, rho, cov);
  Mat avg = Mat::Zero(ch.out_dim, ch.out_dim);
  for (const auto& oc : outcomes) avg += oc.corrected;
  avg = 0.5 * (avg + avg.adjoint().eval());
  // guard against accumulated eigenvalue drift
  double tr = avg.trace().real();
  avg /= tr;
  return DensityMatrix(std::move(avg), {ch.out_dim});
}

DensityMatrix simulate_via_choi(const QuantumChannel& ch, const DensityMatrix& rho) {
  TeleportCovariance cov = teleportation_covariance(ch);
  if (!cov.covariant)
    throw std::invalid_argument("simulate_via_choi: channel is not teleportation-covariant");
  return simulate_via_choi(ch, rho, cov);
}

}  // namespace entdist
