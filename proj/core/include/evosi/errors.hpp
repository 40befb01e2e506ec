#pragma once

#include <stdexcept>
#include <string>

namespace evosi {

struct evosi_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define EVOSI_ERROR(name) \
    struct name : evosi_error { using evosi_error::evosi_error; }

EVOSI_ERROR(subcritical_structure);
EVOSI_ERROR(odd_degree_sum);
EVOSI_ERROR(empty_pool);
EVOSI_ERROR(degenerate_state);
EVOSI_ERROR(invalid_regime);
EVOSI_ERROR(no_root);
EVOSI_ERROR(insufficient_survivors);
EVOSI_ERROR(insufficient_events);
EVOSI_ERROR(out_of_range_error);
EVOSI_ERROR(convergence_failure);
EVOSI_ERROR(series_divergence);
EVOSI_ERROR(config_error);

#undef EVOSI_ERROR

} // namespace evosi
