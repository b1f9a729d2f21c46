#include "fft.hpp"

#include <fftw3.h>

#include "dgbo/spectral.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace dgbo::fft {
namespace {

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// (rank tag, n0, n1, howmany, sign). Plans are made for unaligned scratch
// so they can be executed with fftw_execute_dft on any buffer.
using Key = std::tuple<int, std::size_t, std::size_t, std::size_t, int>;

std::mutex plan_mutex;
std::map<Key, Plan>& cache() {
    static std::map<Key, Plan> plans;
    return plans;
}

fftw_plan get_plan(const Key& key) {
    std::lock_guard lock(plan_mutex);
    auto& plans = cache();
    auto it = plans.find(key);
    if (it != plans.end()) return it->second.get();

    auto [rank, n0, n1, howmany, sign] = key;
    const std::size_t total = rank == 2 ? n0 * n1 : n0 * howmany;
    auto* buf = fftw_alloc_complex(total);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = nullptr;
    if (rank == 2) {
        p = fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1), buf, buf, sign, flags);
    } else {
        int n = static_cast<int>(n0);
        p = fftw_plan_many_dft(1, &n, static_cast<int>(howmany), buf, nullptr, 1, n, buf, nullptr, 1, n,
                               sign, flags);
    }
    fftw_free(buf);
    plans.emplace(key, Plan(p));
    return p;
}

}  // namespace

void transform_1d(std::vector<std::complex<double>>& data, int sign) {
    transform_1d(data.data(), data.size(), sign);
}

void transform_1d(std::complex<double>* data, std::size_t n, int sign) {
    transform_many(data, n, 1, sign);
}

void transform_many(std::complex<double>* data, std::size_t n, std::size_t howmany, int sign) {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(get_plan({1, n, 0, howmany, sign}), p, p);
}

void transform_2d(std::complex<double>* data, std::size_t n0, std::size_t n1, int sign) {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(get_plan({2, n0, n1, 1, sign}), p, p);
}

}  // namespace dgbo::fft

namespace dgbo {

const char* fft_backend_version() { return fftw_version; }

}  // namespace dgbo
