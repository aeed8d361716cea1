#pragma once
#include <vector>

#include "hcu/errors.hpp"

namespace hcu {

// Concentration field s[k][i]: unit k, item i, stored unit-major.
struct SystemState {
    int units = 0;
    int items = 0;
    std::vector<double> values;

    SystemState() = default;
    SystemState(int units_, int items_, double fill = 0.0)
        : units(units_), items(items_),
          values(static_cast<std::size_t>(units_) * items_, fill) {
        if (units_ < 1 || items_ < 1)
            throw ConfigError("SystemState: units and items must be >= 1");
    }

    double at(int k, int i) const { return values[static_cast<std::size_t>(k) * items + i]; }
    double& at(int k, int i) { return values[static_cast<std::size_t>(k) * items + i]; }
    const double* unit(int k) const { return values.data() + static_cast<std::size_t>(k) * items; }
    double* unit(int k) { return values.data() + static_cast<std::size_t>(k) * items; }

    bool same_shape(const SystemState& o) const {
        return units == o.units && items == o.items;
    }
};

} // namespace hcu
