#include "efk/sine_transform.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "efk/error.hpp"

namespace efk {

namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [shape, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const std::vector<int>& shape) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(shape);
    if (it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int n : shape) total *= static_cast<std::size_t>(n);
    std::vector<double> scratch(total);
    std::vector<fftw_r2r_kind> kinds(shape.size(), FFTW_RODFT00);
    fftw_plan plan = fftw_plan_r2r(static_cast<int>(shape.size()), shape.data(), scratch.data(),
                                   scratch.data(), kinds.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) fail(ErrorKind::Unsupported, "FFTW could not plan the sine transform");
    plans_.emplace(shape, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::vector<int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void dst1_inplace(std::span<double> data, std::span<const int> shape) {
  std::size_t total = 1;
  for (int n : shape) {
    require(n >= 1, "transform sizes must be positive");
    total *= static_cast<std::size_t>(n);
  }
  require(total == data.size(), "transform shape does not match data size");
  fftw_plan plan = cache().get(std::vector<int>(shape.begin(), shape.end()));
  fftw_execute_r2r(plan, data.data(), data.data());
}

}  // namespace efk
