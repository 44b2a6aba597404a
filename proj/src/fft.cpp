#include "bolab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace bolab::fft {
namespace {

// fftw planning is not thread-safe; execution through the new-array
// interface is, so plans are created once under a lock and shared.
class PlanCache {
 public:
  using Key = std::tuple<std::size_t, std::size_t, int>;

  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t rows, std::size_t cols, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    const Key key{rows, cols, sign};
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const std::size_t n = rows * cols;
    std::vector<std::complex<double>> a(n), b(n);
    auto* in = reinterpret_cast<fftw_complex*>(a.data());
    auto* out = reinterpret_cast<fftw_complex*>(b.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = rows == 1
        ? fftw_plan_dft_1d(static_cast<int>(cols), in, out, sign, flags)
        : fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), in, out, sign, flags);
    if (plan == nullptr) throw std::runtime_error("fftw planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

int sign_of(Direction d) { return d == Direction::kForward ? FFTW_FORWARD : FFTW_BACKWARD; }

void execute(fftw_plan plan, std::span<const std::complex<double>> in,
             std::span<std::complex<double>> out) {
  // fftw never writes to the input of an out-of-place complex transform.
  auto* src = const_cast<fftw_complex*>(reinterpret_cast<const fftw_complex*>(in.data()));
  fftw_execute_dft(plan, src, reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

void transform(std::span<const std::complex<double>> in, std::span<std::complex<double>> out,
               Direction direction) {
  if (in.size() != out.size()) throw std::invalid_argument("fft: size mismatch");
  if (in.data() == out.data()) throw std::invalid_argument("fft: in-place transform");
  execute(PlanCache::instance().get(1, in.size(), sign_of(direction)), in, out);
}

void transform_2d(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out, std::size_t rows, std::size_t cols,
                  Direction direction) {
  if (in.size() != rows * cols || out.size() != rows * cols) {
    throw std::invalid_argument("fft: 2d size mismatch");
  }
  if (in.data() == out.data()) throw std::invalid_argument("fft: in-place transform");
  if (rows == 1) {
    transform(in, out, direction);
    return;
  }
  execute(PlanCache::instance().get(rows, cols, sign_of(direction)), in, out);
}

}  // namespace bolab::fft
