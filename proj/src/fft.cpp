#include "hardy/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

#include "hardy/errors.hpp"

namespace hardy::fft {
namespace {

// FFTW planning is not thread-safe; execution on new arrays is. Plans are
// created once per (size, sign) under a lock and reused with
// fftw_execute_dft, which is why they are planned FFTW_UNALIGNED.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find({n, sign});
    if (it != plans_.end()) return it->second;
    std::vector<cplx> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
    fftw_plan plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                      reinterpret_cast<fftw_complex*>(out.data()), sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(std::pair{n, sign}, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

std::vector<cplx> transform(std::span<const cplx> input, int sign) {
  if (input.empty()) throw InvalidArgument("fft: empty input");
  std::vector<cplx> in(input.begin(), input.end());
  std::vector<cplx> out(input.size());
  fftw_plan plan = cache().get(static_cast<int>(input.size()), sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

std::vector<cplx> coefficients(std::span<const cplx> samples) {
  auto out = transform(samples, FFTW_FORWARD);
  const double scale = 1.0 / static_cast<double>(samples.size());
  for (auto& c : out) c *= scale;
  return out;
}

std::vector<cplx> samples(std::span<const cplx> coeffs) {
  return transform(coeffs, FFTW_BACKWARD);
}

}  // namespace hardy::fft
