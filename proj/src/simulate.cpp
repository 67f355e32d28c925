#include "reccalc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "reccalc/optstop.hpp"

namespace reccalc::sim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxRecords = 1000000;

void sort_by_x(std::vector<Atom>& atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
}

int highest_index(const std::vector<Atom>& atoms) {
  int best = -1;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (best < 0 || atoms[i].y > atoms[best].y) best = static_cast<int>(i);
  }
  return best;
}

// pi_s on the records of the semi-infinite strip, built from the top:
// skip an exponential area, break off a uniform portion.  Box areas grow
// along the construction, so the policy's selection is the last index k
// with area <= s, and the walk stops as soon as the area passes s.
PolicyOutcome policy_infinite(Problem problem, double s, rng::Stream& rng) {
  double depth = 0.0;  // E1 + E2/U1 + ...
  double width = 1.0;  // U1 U2 ... (times the initial cut for VC)
  if (problem == Problem::VC) width = rng.uniform_pos();
  int selected = 0;
  double sel_x = -1.0, sel_depth = -1.0;
  for (int k = 1; k <= kMaxRecords; ++k) {
    depth += rng.exponential() / width;
    width *= rng.uniform_pos();
    const double area = depth * (1.0 - width);
    if (area > s) break;
    selected = k;
    sel_x = width;
    sel_depth = depth;
  }
  PolicyOutcome out;
  out.stopped = selected >= 1;
  out.success = selected == 1;
  if (out.stopped) {
    out.stop_x = sel_x;
    out.stop_depth = sel_depth;
  }
  return out;
}

PolicyOutcome policy_fi_rect(double t, double s, rng::Stream& rng,
                             bool duration_reward) {
  auto atoms = sample_ppp_rect(t, t, rng);  // [0,t] x [0,1]
  sort_by_x(atoms);
  const int target = highest_index(atoms);
  PolicyOutcome out;
  double run_max = -kInf;
  int stop_idx = -1;
  double next_record_x = -1.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].y <= run_max) continue;
    run_max = atoms[i].y;
    if (stop_idx >= 0 && next_record_x < 0.0) next_record_x = atoms[i].x;
    if (stop_idx < 0) {
      const double box = (t - atoms[i].x) * (1.0 - atoms[i].y);
      if (box <= s) {
        stop_idx = static_cast<int>(i);
        out.stopped = true;
        out.stop_x = atoms[i].x;
        out.stop_depth = 1.0 - atoms[i].y;
      }
    }
  }
  out.success = out.stopped && stop_idx == target;
  if (duration_reward && out.stopped) {
    out.reward = (next_record_x >= 0.0 ? next_record_x : t) - out.stop_x;
  }
  return out;
}

PolicyOutcome policy_vc_rect(double t, double s, rng::Stream& rng) {
  auto atoms = sample_ppp_rect(t, t, rng);
  const double cut = t * rng.uniform();
  sort_by_x(atoms);
  PolicyOutcome out;
  double run_max = -kInf;
  int stop_idx = -1, target = -1;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].x >= cut) break;  // scanning halts at the cut
    if (target < 0 || atoms[i].y > atoms[target].y) target = static_cast<int>(i);
    if (atoms[i].y <= run_max) continue;
    run_max = atoms[i].y;
    if (stop_idx < 0) {
      const double box = (t - atoms[i].x) * (1.0 - atoms[i].y);
      if (box <= s) {
        stop_idx = static_cast<int>(i);
        out.stopped = true;
        out.stop_x = atoms[i].x;
      }
    }
  }
  out.success = out.stopped && stop_idx == target;
  return out;
}

PolicyOutcome policy_hc_rect(double t, double s, rng::Stream& rng) {
  auto atoms = sample_ppp_rect(t, t, rng);
  const double cut = rng.uniform();
  sort_by_x(atoms);
  PolicyOutcome out;
  double lo = 0.0, hi = 1.0;  // uncertainty interval bracketing the cut
  int stop_idx = -1, target = -1;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double y = atoms[i].y;
    if (y < cut && (target < 0 || y > atoms[target].y)) {
      target = static_cast<int>(i);
    }
    if (y <= lo || y >= hi) continue;
    if (y < cut) {
      // upper record; its adjoint is the current holder of hi
      if (stop_idx < 0) {
        const double corange_box = (hi - y) * (t - atoms[i].x);
        if (corange_box <= s) {
          stop_idx = static_cast<int>(i);
          out.stopped = true;
          out.stop_x = atoms[i].x;
        }
      }
      lo = y;
    } else {
      hi = y;
    }
  }
  out.success = out.stopped && stop_idx == target;
  return out;
}

PolicyOutcome policy_binpack(double t, double s, rng::Stream& rng) {
  PolicyOutcome out;
  double when = 0.0;
  double capacity = 1.0;
  int pack_idx = 0, stop_idx = -1, last_idx = -1;
  while (true) {
    when += rng.exponential();
    if (when > t) break;
    const double size = rng.uniform();
    if (size > capacity) continue;
    capacity -= size;
    last_idx = pack_idx;
    if (stop_idx < 0 && capacity * (t - when) <= s) {
      stop_idx = pack_idx;
      out.stopped = true;
      out.stop_x = when;
    }
    ++pack_idx;
  }
  out.success = out.stopped && stop_idx == last_idx;
  return out;
}

}  // namespace

std::vector<Atom> sample_ppp_rect(double t, double aspect, rng::Stream& rng) {
  if (!(t >= 0.0) || t == kInf) {
    throw std::domain_error("sample_ppp_rect: requires finite t >= 0");
  }
  if (!(aspect > 0.0)) throw std::domain_error("sample_ppp_rect: bad aspect");
  const double w = std::sqrt(t * aspect);
  const double h = (t == 0.0) ? 1.0 : t / w;
  const int n = rng.poisson(t);
  std::vector<Atom> atoms;
  atoms.reserve(n);
  for (int i = 0; i < n; ++i) {
    atoms.push_back({w * rng.uniform(), h * rng.uniform()});
  }
  return atoms;
}

RecordSequence extract_records(std::vector<Atom> atoms, double width,
                               double height) {
  sort_by_x(atoms);
  RecordSequence seq;
  double run_max = -kInf;
  for (const Atom& a : atoms) {
    if (a.y <= run_max) continue;
    run_max = a.y;
    seq.records.push_back(a);
    seq.box_areas.push_back((width - a.x) * (height - a.y));
  }
  return seq;
}

std::pair<RecordSequence, RecordSequence> extract_records_cut(
    std::vector<Atom> atoms, double width, double height, double cut_y) {
  if (!(cut_y >= 0.0 && cut_y <= height)) {
    throw std::domain_error("extract_records_cut: cut outside rectangle");
  }
  sort_by_x(atoms);
  RecordSequence upper, lower;
  double run_max = -kInf, run_min = kInf;
  for (const Atom& a : atoms) {
    if (a.y < cut_y) {
      if (a.y > run_max) {
        run_max = a.y;
        upper.records.push_back(a);
        upper.box_areas.push_back((width - a.x) * (cut_y - a.y));
      }
    } else if (a.y < run_min) {
      run_min = a.y;
      lower.records.push_back(a);
      lower.box_areas.push_back((width - a.x) * (a.y - cut_y));
    }
  }
  return {std::move(upper), std::move(lower)};
}

ChainPath sample_P_chain(double t, rng::Stream& rng) {
  if (!(t > 0.0) || t == kInf) {
    throw std::domain_error("sample_P_chain: requires finite t > 0");
  }
  ChainPath path{ChainKind::P, t, {}};
  double state = t;
  while (state > 0.0) {
    const double e = rng.exponential();
    state = (e >= state) ? 0.0 : (state - e) * rng.uniform();
    path.states.push_back(state);
  }
  return path;
}

ChainPath sample_Q_chain(double t, rng::Stream& rng) {
  if (!(t > 0.0) || t == kInf) {
    throw std::domain_error("sample_Q_chain: requires finite t > 0");
  }
  ChainPath path{ChainKind::Q, t, {}};
  double state = t;
  while (state > 0.0) {
    const double e = rng.exponential();
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    state = (e >= state * u2) ? 0.0 : (state - e) * u1;
    path.states.push_back(state);
  }
  return path;
}

ChainPath sample_corange_chain(double t, rng::Stream& rng) {
  if (!(t > 0.0) || t == kInf) {
    throw std::domain_error("sample_corange_chain: requires finite t > 0");
  }
  ChainPath path{ChainKind::Corange, t, {}};
  double state = t;
  while (state > 0.0) {
    const double e = rng.exponential();
    if (e >= state) {
      state = 0.0;
      path.states.push_back(0.0);
      break;
    }
    state = (state - e) * std::max(rng.uniform(), rng.uniform());
    const bool upper = rng.uniform() < 0.5;
    if (upper) path.states.push_back(state);
    if (state == 0.0 && !upper) path.states.push_back(0.0);
  }
  return path;
}

std::vector<double> sample_eu_joint(EuKind kind, int k, rng::Stream& rng) {
  if (k < 1) throw std::domain_error("sample_eu: requires k >= 1");
  std::vector<double> out;
  out.reserve(k);
  double depth = 0.0;
  double prod = (kind == EuKind::B) ? rng.uniform_pos() : 1.0;
  // For the corange sequence the trailing exponential of entry i is the
  // regular term of entry i+1, so it is drawn once and carried over.
  double carried = (kind == EuKind::C) ? rng.exponential() : 0.0;
  for (int i = 1; i <= k; ++i) {
    depth += (kind == EuKind::C ? carried : rng.exponential()) / prod;
    prod *= rng.uniform_pos();
    if (kind == EuKind::C) {
      carried = rng.exponential();
      out.push_back((depth + carried / prod) * (1.0 - prod));
    } else {
      out.push_back(depth * (1.0 - prod));
    }
  }
  return out;
}

double sample_eu(EuKind kind, int k, rng::Stream& rng) {
  return sample_eu_joint(kind, k, rng).back();
}

PolicyOutcome run_policy(Problem problem, double t, double s,
                         rng::Stream& rng) {
  if (!(s > 0.0)) throw std::domain_error("run_policy: requires s > 0");
  if (std::isnan(t) || t < 0.0) throw std::domain_error("run_policy: requires t >= 0");
  if (t == kInf) {
    if (problem != Problem::FI && problem != Problem::VC) {
      throw std::invalid_argument("run_policy: t = inf supports FI and VC only");
    }
    return policy_infinite(problem, s, rng);
  }
  switch (problem) {
    case Problem::FI:
      return policy_fi_rect(t, s, rng, false);
    case Problem::Duration:
      return policy_fi_rect(t, s, rng, true);
    case Problem::VC:
      return policy_vc_rect(t, s, rng);
    case Problem::HC:
      return policy_hc_rect(t, s, rng);
    case Problem::BinPack:
      return policy_binpack(t, s, rng);
  }
  throw std::logic_error("run_policy: unreachable");
}

std::pair<PolicyOutcome, PolicyOutcome> run_horver_square(double t,
                                                          rng::Stream& rng) {
  if (!(t > 0.0) || t == kInf) {
    throw std::domain_error("run_horver_square: requires finite t > 0");
  }
  const double side = std::sqrt(t);
  const double threshold = optstop::t_P();
  auto atoms = sample_ppp_rect(t, 1.0, rng);  // square [0,side]^2
  const double cut_h = side * rng.uniform();
  const double cut_v = side * rng.uniform();
  sort_by_x(atoms);

  int target = -1;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].x < cut_v && atoms[i].y < cut_h &&
        (target < 0 || atoms[i].y > atoms[target].y)) {
      target = static_cast<int>(i);
    }
  }

  // Hor: knows V, sees above/below-H labels, ignores atoms right of V.
  PolicyOutcome hor;
  {
    double lo = 0.0, hi = side;
    int stop_idx = -1;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (atoms[i].x >= cut_v) continue;
      const double y = atoms[i].y;
      if (y <= lo || y >= hi) continue;
      if (y < cut_h) {
        if (stop_idx < 0 && (hi - y) * (cut_v - atoms[i].x) <= threshold) {
          stop_idx = static_cast<int>(i);
          hor.stopped = true;
          hor.stop_x = atoms[i].x;
        }
        lo = y;
      } else {
        hi = y;
      }
    }
    hor.success = hor.stopped && stop_idx == target;
  }

  // Ver: knows H, ignores atoms above H, does not know V.
  PolicyOutcome ver;
  {
    double run_max = -kInf;
    int stop_idx = -1;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const double y = atoms[i].y;
      if (y >= cut_h || y <= run_max) continue;
      run_max = y;
      if (stop_idx < 0 && (side - atoms[i].x) * (cut_h - y) <= threshold) {
        stop_idx = static_cast<int>(i);
        ver.stopped = true;
        ver.stop_x = atoms[i].x;
      }
    }
    ver.success = ver.stopped && stop_idx == target;
  }

  return {hor, ver};
}

MCEstimate mc_policy_success(Problem problem, double t, double s,
                             std::uint64_t n, std::uint64_t seed,
                             unsigned workers) {
  return parallel::mc_mean(n, seed, workers,
                           [problem, t, s](rng::Stream& rng, std::uint64_t) {
                             return run_policy(problem, t, s, rng).success
                                        ? 1.0
                                        : 0.0;
                           });
}

MCEstimate mc_policy_reward(double t, double s, std::uint64_t n,
                            std::uint64_t seed, unsigned workers) {
  return parallel::mc_mean(n, seed, workers,
                           [t, s](rng::Stream& rng, std::uint64_t) {
                             return run_policy(Problem::Duration, t, s, rng)
                                 .reward;
                           });
}

HorVerEstimate mc_horver(double t, std::uint64_t n, std::uint64_t seed,
                         unsigned workers) {
  const auto est = parallel::mc_mean_multi<3>(
      n, seed, workers, [t](rng::Stream& rng, std::uint64_t) {
        const auto [hor, ver] = run_horver_square(t, rng);
        const bool differ = hor.stopped != ver.stopped ||
                            (hor.stopped && hor.stop_x != ver.stop_x);
        return std::array<double, 3>{hor.success ? 1.0 : 0.0,
                                     ver.success ? 1.0 : 0.0,
                                     differ ? 1.0 : 0.0};
      });
  return {est[0], est[1], est[2]};
}

DecompositionEstimate decompose_p1(double s, std::uint64_t n,
                                   std::uint64_t seed, unsigned workers) {
  if (!(s > 0.0)) throw std::domain_error("decompose_p1: requires s > 0");
  const auto est = parallel::mc_mean_multi<3>(
      n, seed, workers, [s](rng::Stream& rng, std::uint64_t) {
        const double e1 = rng.exponential();
        const double e2 = rng.exponential();
        const double u1 = rng.uniform_pos();
        const double u2 = rng.uniform_pos();
        const double top = e1 + e2 / u1;
        const bool part1 = e1 * (1.0 - u1) < s && s < top * (1.0 - u1);
        const bool part2 =
            top * (1.0 - u1) < s && s < top * (1.0 - u1 * u2);
        return std::array<double, 3>{part1 ? 1.0 : 0.0, part2 ? 1.0 : 0.0,
                                     (part1 || part2) ? 1.0 : 0.0};
      });
  return {est[0], est[1], est[2]};
}

}  // namespace reccalc::sim
