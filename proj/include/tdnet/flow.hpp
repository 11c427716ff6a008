#ifndef TDNET_FLOW_HPP
#define TDNET_FLOW_HPP

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tdnet/errors.hpp"
#include "tdnet/expr.hpp"
#include "tdnet/network.hpp"

namespace tdnet {

// Tabulated time series, linearly interpolated; clamped outside the sample range.
struct FlowTable {
    std::vector<double> times;  // strictly increasing
    std::vector<double> values;

    double eval(double t) const {
        if (times.empty()) return 0.0;
        if (t <= times.front()) return values.front();
        if (t >= times.back()) return values.back();
        size_t hi = 1;
        while (times[hi] < t) ++hi;
        double w = (t - times[hi - 1]) / (times[hi] - times[hi - 1]);
        return values[hi - 1] + w * (values[hi] - values[hi - 1]);
    }
};

struct FlowFn {
    std::variant<Expr, FlowTable> fn;

    double eval(double t) const {
        if (auto* e = std::get_if<Expr>(&fn)) return e->eval(t);
        return std::get<FlowTable>(fn).eval(t);
    }
    bool is_expr() const { return std::holds_alternative<Expr>(fn); }
};

enum class EvalMode { Instantaneous, Windowed };

// Directed flow rates f_uv(t) on adjacent node pairs. Entries may only exist
// for links of the owning network; absent flows on adjacent pairs read as 0.
class FlowField {
public:
    FlowField() = default;
    explicit FlowField(Network net, double bound = 0.0) : net_(std::move(net)), bound_(bound) {}

    const Network& net() const { return net_; }
    double bound() const { return bound_; }
    void set_bound(double b) { bound_ = b; }

    void set(NodeId u, NodeId v, FlowFn fn) {
        require_adjacent(u, v);
        entries_[{u, v}] = std::move(fn);
    }
    void set(NodeId u, NodeId v, const Expr& e) { set(u, v, FlowFn{e}); }
    void set(NodeId u, NodeId v, double constant_rate) { set(u, v, Expr::constant(constant_rate)); }

    const std::map<std::pair<NodeId, NodeId>, FlowFn>& entries() const { return entries_; }

    bool has(NodeId u, NodeId v) const { return entries_.count({u, v}) > 0; }

    // Instantaneous rate f_uv(t); Windowed mode averages over [t, t+delta]
    // by 128-point composite Simpson quadrature.
    double eval(NodeId u, NodeId v, double t, EvalMode mode = EvalMode::Instantaneous,
                double delta = 0.0) const {
        require_adjacent(u, v);
        auto it = entries_.find({u, v});
        if (it == entries_.end()) return 0.0;
        double value;
        if (mode == EvalMode::Instantaneous || delta <= 0.0) {
            value = it->second.eval(t);
        } else {
            value = simpson_mean(it->second, t, delta);
        }
        if (value < 0.0)
            throw FlowNegative("flow f_{" + std::to_string(u) + "," + std::to_string(v) +
                               "}(" + std::to_string(t) + ") = " + std::to_string(value));
        if (bound_ > 0.0 && value > bound_ + 1e-12)
            throw FlowUnbounded("flow exceeds declared bound " + std::to_string(bound_));
        return value;
    }

    // d f_uv / dt, analytic; tabulated entries are not differentiable.
    double eval_rate_of_change(NodeId u, NodeId v, double t) const {
        require_adjacent(u, v);
        auto it = entries_.find({u, v});
        if (it == entries_.end()) return 0.0;
        auto* e = std::get_if<Expr>(&it->second.fn);
        if (!e)
            throw NonDifferentiableFlow("tabulated flow series has no analytic derivative");
        return e->diff_t().eval(t);
    }

private:
    void require_adjacent(NodeId u, NodeId v) const {
        net_.check_node(u);
        net_.check_node(v);
        if (!net_.has_link(u, v))
            throw NotAdjacent("nodes " + std::to_string(u) + " and " + std::to_string(v) +
                              " are not adjacent");
    }

    static double simpson_mean(const FlowFn& fn, double t, double delta) {
        constexpr int kPoints = 128; // even interval count
        double h = delta / kPoints;
        double acc = fn.eval(t) + fn.eval(t + delta);
        for (int i = 1; i < kPoints; ++i)
            acc += fn.eval(t + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
        return acc * h / 3.0 / delta;
    }

    Network net_;
    double bound_ = 0.0; // 0 means "no declared bound"
    std::map<std::pair<NodeId, NodeId>, FlowFn> entries_;
};

inline double evaluate_flow(const FlowField& field, NodeId u, NodeId v, double t,
                            EvalMode mode = EvalMode::Instantaneous, double delta = 0.0) {
    return field.eval(u, v, t, mode, delta);
}

} // namespace tdnet

#endif
