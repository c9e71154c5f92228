#pragma once

#include <cmath>
#include <cstddef>

namespace bwl {

// Neumaier (improved Kahan) compensated accumulator.
//
// Witness ratios in this project compare series terms spread over ~30 orders
// of magnitude (phi(65536) ~ 1e-9 against S(2) ~ 0.27, spike corrections at
// 2^-128), so every series and every panel sum goes through one of these
// instead of a bare double.
class Accum {
  public:
    void add(double x) {
        double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double total() const { return sum_ + comp_; }
    void reset() { sum_ = comp_ = 0.0; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

template <typename It>
double compensated_sum(It first, It last) {
    Accum a;
    for (; first != last; ++first) a.add(*first);
    return a.total();
}

} // namespace bwl
