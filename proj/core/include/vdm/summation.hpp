#pragma once

#include <cmath>

namespace vdm {

// Neumaier compensated accumulator. Partition sums reach ~4k terms and trace
// power sums lose digits at seventh powers; plain accumulation is not enough
// for the 1e-12 contracts.
class NeumaierSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace vdm
