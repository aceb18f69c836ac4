#ifndef FOLRES_DRIVER_HPP
#define FOLRES_DRIVER_HPP

#include <optional>
#include <string>
#include <vector>

#include "folres/blowup.hpp"
#include "folres/instance.hpp"
#include "folres/invariant.hpp"

namespace folres {

struct RunConfig {
    int max_steps = 8;
    /// When false a branch reaching max_steps is listed as finished instead.
    bool budget_throws = true;
    TransformMode mode = TransformMode::Controlled;
    /// Also sample exceptional points with one barred center coordinate at 1.
    bool unit_samples = true;
    long multiplier = 1;
    /// Stop at a point once its invariant equals this vector.
    std::optional<InvVector> stop_pattern;
};

struct ChartSample {
    std::string chart;  // chart variable
    std::string label;  // "origin" or "y~=1"
    InvVector after;
    bool dropped = false;
    bool continued = false;  // re-enters the loop
    std::string note;
};

struct TraceStep {
    int step = 0;
    std::string point;  // branch label
    InvVector before;
    Center center;
    std::string cobordism;
    std::vector<ChartSample> samples;
};

struct RunResult {
    std::vector<TraceStep> steps;
    std::vector<std::string> finished;  // branch labels with their stopping reason
    std::vector<std::string> violations;
    std::vector<std::string> skipped;
    bool ok() const { return violations.empty(); }
    std::string str() const;
    std::string json() const;
};

/// Unit times a monomial in the divisor variables.
bool is_principal_monomial(const Context& ctx, const ReesAlgebra& R);

RunResult principalize(const Instance& inst, const RunConfig& cfg = {});

struct ChartPoint {
    std::string chart;
    std::vector<Rational> coords;  // in the chart ring's variable order
};

struct TrackResult {
    std::vector<ChartPoint> points;
    std::vector<std::string> skipped;
};

/// Rational preimages of a source point (ambient coordinates) on the
/// exceptional side of one chart; s~ is taken positive.
TrackResult track_point(const Cobordism& B, const EtaleChart& ch, const std::vector<Rational>& point);
/// Union over the charts of all center variables.
TrackResult track_point(const Cobordism& B, const std::vector<Rational>& point);

/// Text report of the cobordant blow-up (or one chart) of the instance's
/// center, or of the computed center when the file has none.
std::string blowup_report(const Instance& inst, const std::optional<std::string>& chart, TransformMode mode);

}  // namespace folres

#endif
