#include "fracq/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "fracq/error.hpp"

namespace fracq::fft {

namespace {

using PlanKey = std::tuple<int, int, int, int, int>;

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& entry : plans_) fftw_destroy_plan(entry.second);
  }

  fftw_plan get(cplx* data, int n, int howmany, int stride, int dist, int sign) {
    const PlanKey key{n, howmany, stride, dist, sign};
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_plan plan = fftw_plan_many_dft(1, &n, howmany, buf, nullptr, stride, dist, buf, nullptr,
                                        stride, dist, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    require(plan != nullptr, ErrorCode::invalid_argument, "FFTW could not create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void transform(cplx* data, int n, int howmany, int stride, int dist, int sign) {
  require(n >= 1 && howmany >= 1 && stride >= 1 && dist >= 1, ErrorCode::invalid_argument,
          "invalid FFT layout");
  if (n == 1) return;
  fftw_plan plan = cache().get(data, n, howmany, stride, dist, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace fracq::fft
