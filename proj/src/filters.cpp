#include "drem_im/filters.hpp"

#include <stdexcept>

namespace drem_im {

FirstOrderFilter::FirstOrderFilter(FilterKind k, double alpha, double x0)
    : kind(k), pole(alpha), state(x0) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("filter pole must be a finite positive number");
    }
}

double FirstOrderFilter::output(double u) const {
    switch (kind) {
        case FilterKind::lowpass: return lowpass_derivative(u, state, pole).lowpass;
        case FilterKind::derivative_lowpass: return lowpass_derivative(u, state, pole).derivative;
        case FilterKind::pure_lag: return pure_lag(u, state, pole).y;
        case FilterKind::washout: return washout(u, state, pole).y;
    }
    return 0.0;
}

double FirstOrderFilter::derivative(double u) const {
    switch (kind) {
        case FilterKind::lowpass:
        case FilterKind::derivative_lowpass: return lowpass_derivative(u, state, pole).d_state;
        case FilterKind::pure_lag: return pure_lag(u, state, pole).d_state;
        case FilterKind::washout: return washout(u, state, pole).d_state;
    }
    return 0.0;
}

FilterChain::FilterChain(std::vector<FirstOrderFilter> stages) : stages_(std::move(stages)) {}

double FilterChain::output(double u) const {
    for (const auto& s : stages_) u = s.output(u);
    return u;
}

std::vector<double> FilterChain::derivatives(double u, const std::vector<double>& states) const {
    std::vector<double> d(stages_.size());
    for (std::size_t k = 0; k < stages_.size(); ++k) {
        FirstOrderFilter stage = stages_[k];
        stage.state = states[k];
        d[k] = stage.derivative(u);
        u = stage.output(u);
    }
    return d;
}

}  // namespace drem_im
