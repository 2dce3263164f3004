#ifndef BMDISC_EVENTS_HPP
#define BMDISC_EVENTS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bmdisc/paths.hpp"
#include "bmdisc/rng.hpp"

namespace bmdisc {

/** Grid-side hit: first mesh index whose value weakly exceeds the barrier. */
struct GridHit {
    std::int64_t index = 0;
    double tau_n = 0.0;
    double value = 0.0;
};

/** Continuous-side hit located inside one mesh interval. */
struct ContinuousHit {
    std::int64_t interval = 0;  // crossing lies in (interval, interval+1)/n
    double tau_cont = 0.0;
    double value_cont = 0.0;  // barrier value at tau_cont
};

struct GridMin {
    std::int64_t index = 0;
    double value = 0.0;
};

struct ContinuousMin {
    std::int64_t interval = 0;  // minimum lies in [interval, interval+1]/n
    double t_cont = 0.0;
    double min_cont = 0.0;
};

/** Coupled hit readouts for one path; grid side never precedes the oracle. */
struct HitRecord {
    double tau_n = 0.0;
    double value_n = 0.0;
    double tau_cont = 0.0;
    double value_cont = 0.0;
};

/**
 * The centred error statistics of one coupled path: time_err = n * (grid
 * event time - continuous event time), pos_err = sqrt(n) * (grid event value
 * - continuous event value), frac = ceil(n * t) - n * t at the continuous
 * event time t.
 */
struct ErrorTriplet {
    double time_err = 0.0;
    double pos_err = 0.0;
    double frac = 0.0;
};

/**
 * Path recentred at `center_time` and rescaled by sqrt(scale) in space,
 * `scale` in time.  Entry i sits at integer offset index k = first_k + i,
 * i.e. at time offset u + k in rescaled units; `offsets` stores those time
 * offsets and `values` the rescaled increments against `center_value`.
 */
struct ZoomedProcess {
    double center_time = 0.0;
    double center_value = 0.0;
    double scale = 1.0;
    double u = 0.0;
    std::int64_t first_k = 0;
    std::vector<double> offsets;
    std::vector<double> values;
};

/** Drifted path generated until the global minimum is certified in-segment. */
struct TruncatedPath {
    PathGrid grid;
    std::int64_t stop_index = 0;
};

struct HitTripletDraw {
    ErrorTriplet triplet;
    HitRecord record;
};

std::optional<GridHit> detect_hit_grid(const PathGrid& p, const BarrierSpec& b);

/**
 * Locates the continuous path's first barrier crossing given the sampled
 * grid.  Constant barriers are handled exactly: per-interval bridge crossing
 * Bernoullis followed by an exact conditional passage-time draw, so `depth`
 * is ignored.  Nonconstant barriers run the same test on a bridge-refined
 * mesh of 2^depth cells per interval with the barrier frozen at each cell
 * midpoint; the bias is O(barrier slope / (n * 2^depth)).
 */
std::optional<ContinuousHit> locate_hit_continuous(Stream& s, const PathGrid& p,
                                                   const BarrierSpec& b,
                                                   int depth);

/** First index attaining the minimum over [first, last], ties to the left. */
GridMin grid_argmin(const PathGrid& p, std::int64_t first, std::int64_t last);

/**
 * Exact continuous minimum of the path over its span.  The minimum value is
 * drawn from per-interval bridge minima (intervals that certifiably cannot
 * beat the running best are skipped); its time is drawn from the exact
 * argmin-time law inside the winning interval.
 */
ContinuousMin continuous_min(Stream& s, const PathGrid& p);

/**
 * Extends a drifted grid path (drift mu > 0) until current value minus
 * running minimum reaches (sigma^2 / (2 mu)) * ln(1/eps), after which the
 * global minimum lies outside the segment with probability at most eps.
 */
TruncatedPath global_min_truncated(Stream& s, double mu, double sigma,
                                   std::int64_t n, double eps);

/**
 * One hit-error triplet for a constant barrier, without storing the path:
 * the crossing engine supplies the walk hit and the exact continuous
 * passage in one sweep.  Empty on step-cap exhaustion (counted by callers
 * as a discard).
 */
std::optional<ErrorTriplet> error_triplet_hit(Stream& s, std::int64_t n,
                                              double level, double mu,
                                              double sigma,
                                              std::int64_t max_steps);

/** Grid-backed hit triplet; empty when either side fails to hit. */
std::optional<HitTripletDraw> error_triplet_hit_grid(Stream& s,
                                                     const PathGrid& p,
                                                     const BarrierSpec& b,
                                                     int depth);

/** Minimum-error triplet over the full span of a sampled path. */
ErrorTriplet error_triplet_min(Stream& s, const PathGrid& p);

/** Same construction on a drift-truncated global path. */
ErrorTriplet error_triplet_globalmin(Stream& s, double mu, double sigma,
                                     std::int64_t n, double eps);

/** Rescales a sampled path around an arbitrary center point. */
ZoomedProcess zoom_path(const PathGrid& p, double center_time,
                        double center_value);

struct MappedHit {
    double time_err = 0.0;
    double pos_err = 0.0;
};

/**
 * First k >= 0 with zoomed value strictly above the zoomed barrier at offset
 * u + k; empty when no available offset qualifies.  `zoomed_barrier` maps a
 * rescaled time offset to the rescaled barrier increment.
 */
std::optional<MappedHit> apply_error_mapping_hit(
    double u, const ZoomedProcess& z,
    const std::function<double(double)>& zoomed_barrier);

/** Argmin analogue over every available offset, first attainment wins. */
ErrorTriplet apply_error_mapping_min(double u, const ZoomedProcess& z);

}  // namespace bmdisc

#endif  // BMDISC_EVENTS_HPP
