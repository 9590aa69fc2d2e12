#pragma once

#include <limits>

namespace hfgsim {

struct PhysicalConstants {
    double rho = 1000.0;  // kg/m^3
    double g = 9.81;      // m/s^2
};

struct SimulationConfig {
    double dt = 1.0;         // s, > 0
    long horizonSteps = 1;   // K, >= 1
    long stride = 1;         // record every stride-th step; must divide K
    PhysicalConstants constants;

    bool valid() const {
        return dt > 0.0 && dt < std::numeric_limits<double>::infinity() &&
               horizonSteps >= 1 && stride >= 1 && horizonSteps % stride == 0 &&
               constants.rho > 0.0 && constants.g > 0.0;
    }
};

}  // namespace hfgsim
