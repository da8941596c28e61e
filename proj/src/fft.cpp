#include "pdsys/fft.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <utility>

#include <fftw3.h>

#include "pdsys/error.hpp"

namespace pdsys {
namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::pair<std::vector<int>, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

// Planned with FFTW_UNALIGNED so any buffer can go through fftw_execute_dft.
fftw_plan get_plan(const std::vector<int>& dims, int sign) {
  PlanCache& c = cache();
  std::lock_guard<std::mutex> lock(c.mutex);
  auto key = std::make_pair(dims, sign);
  auto it = c.plans.find(key);
  if (it != c.plans.end()) return it->second;
  const std::size_t total =
      std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  fftw_complex* buf = fftw_alloc_complex(total);
  fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf,
                                 sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  if (!plan) throw Error(ErrorCode::kShapeMismatch, "FFTW could not plan this transform");
  c.plans.emplace(key, plan);
  return plan;
}

}  // namespace

void fft_inplace(Complex* data, const std::vector<int>& dims, int sign) {
  fftw_plan plan = get_plan(dims, sign);
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, p, p);
}

void fft_inplace(std::vector<Complex>& data, const std::vector<int>& dims, int sign) {
  const std::size_t total =
      std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  if (data.size() != total) throw Error(ErrorCode::kShapeMismatch, "FFT buffer size mismatch");
  fft_inplace(data.data(), dims, sign);
}

}  // namespace pdsys
