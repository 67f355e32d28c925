#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "reccalc/parallel.hpp"
#include "reccalc/rng.hpp"

// Monte Carlo samplers and policy simulators: the independent experimental
// route against which every closed form in recordlaw/optstop is checked.

namespace reccalc::sim {

using reccalc::parallel::MCEstimate;

struct Atom {
  double x;
  double y;
};

// Upper records (left-to-right running maxima) of a point configuration in
// [0,width] x [0,height], with the box area (width-x)(height-y) per record.
struct RecordSequence {
  std::vector<Atom> records;
  std::vector<double> box_areas;
};

enum class ChainKind { P, Q, Corange };

// States visited after leaving the start, strictly decreasing, final 0.
struct ChainPath {
  ChainKind kind;
  double start;
  std::vector<double> states;
};

struct PolicyOutcome {
  bool stopped = false;
  bool success = false;
  double stop_x = -1.0;      // horizontal coordinate of the selected atom
  double stop_depth = -1.0;  // |y| of the selected atom (semi-infinite runs)
  double reward = 0.0;       // duration problem only
};

enum class Problem { FI, VC, HC, Duration, BinPack };
enum class EuKind { A, B, C };

// Poisson(t) atoms placed uniformly in [0,w] x [0,h] with w*h = t and
// w/h = aspect.
std::vector<Atom> sample_ppp_rect(double t, double aspect, rng::Stream& rng);

RecordSequence extract_records(std::vector<Atom> atoms, double width,
                               double height);

// Upper records (below the cut) and lower records (above the cut) for the
// horizontal-cut information structure.  Box areas are taken in the
// respective sub-rectangle.
std::pair<RecordSequence, RecordSequence> extract_records_cut(
    std::vector<Atom> atoms, double width, double height, double cut_y);

ChainPath sample_P_chain(double t, rng::Stream& rng);
ChainPath sample_Q_chain(double t, rng::Stream& rng);
// Corange-box areas recorded at upper-record steps only; lower-record steps
// shrink the state without being recorded.
ChainPath sample_corange_chain(double t, rng::Stream& rng);

// One draw of the k-th entry (or the first k entries jointly) of the
// exponential-uniform representations
//   A_k = (E1 + E2/U1 + ... + Ek/(U1...U_{k-1})) (1 - U1...Uk)
//   B_k = (E1/U + ... + Ek/(U U1...U_{k-1})) (1 - U U1...Uk)
//   C_k = (E1 + ... + E_{k+1}/(U1...Uk)) (1 - U1...Uk)
double sample_eu(EuKind kind, int k, rng::Stream& rng);
std::vector<double> sample_eu_joint(EuKind kind, int k, rng::Stream& rng);

// One policy trial.  t = inf is supported for FI and VC (exponential-skip /
// uniform-break construction of the records from the top); the threshold
// policy stops at the first record with (corange-)box area <= s.
PolicyOutcome run_policy(Problem problem, double t, double s,
                         rng::Stream& rng);

// Two observers on one square of area t with shared cuts H and V, both
// hunting the highest atom south-west of (V,H) with threshold t_P.
std::pair<PolicyOutcome, PolicyOutcome> run_horver_square(double t,
                                                          rng::Stream& rng);

// Monte Carlo drivers (deterministic for fixed seed, any worker count).
MCEstimate mc_policy_success(Problem problem, double t, double s,
                             std::uint64_t n, std::uint64_t seed,
                             unsigned workers);
MCEstimate mc_policy_reward(double t, double s, std::uint64_t n,
                            std::uint64_t seed, unsigned workers);

struct HorVerEstimate {
  MCEstimate hor;
  MCEstimate ver;
  MCEstimate disagree;  // frequency of stopping decisions that differ
};
HorVerEstimate mc_horver(double t, std::uint64_t n, std::uint64_t seed,
                         unsigned workers);

// Frequencies of the two events splitting {A_1 < s < A_2} by whether the
// top spacing alone pushes the second box area past s.  part1 + part2
// estimates p_1(inf,s).
struct DecompositionEstimate {
  MCEstimate part1;
  MCEstimate part2;
  MCEstimate total;
};
DecompositionEstimate decompose_p1(double s, std::uint64_t n,
                                   std::uint64_t seed, unsigned workers);

}  // namespace reccalc::sim
