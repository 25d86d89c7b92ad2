// Timing comparison of the OpenMP kernels against the serial reference, plus
// the batch forward/backward pass at 1 thread vs all threads. The parallel
// kernels are bit-identical to the serial ones by construction; this binary
// double-checks that while measuring the speedup.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "spectral/linalg/kernels.hpp"
#include "spectral/linalg/power_iteration.hpp"
#include "spectral/nnlab/network.hpp"
#include "spectral/rng.hpp"

using namespace spectral;
using Clock = std::chrono::steady_clock;

namespace {

double time_of(const std::function<void()>& fn, int reps) {
    fn();  // warm-up
    const auto t0 = Clock::now();
    for (int r = 0; r < reps; ++r) fn();
    return std::chrono::duration<double>(Clock::now() - t0).count() / reps;
}

void row(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-28s %10.3f ms %10.3f ms %7.2fx   %s\n", name, serial * 1e3, parallel * 1e3,
                serial / parallel, identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    int n = 20000, d = 64;
    if (argc > 2) {
        n = std::stoi(argv[1]);
        d = std::stoi(argv[2]);
    }
    std::printf("kernel benchmark: n=%d d=%d, %d threads\n", n, d, omp_get_max_threads());
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    Rng rng(1);
    linalg::DenseMatrix m(n, d);
    for (double& v : m.data) v = rng.uniform(-1, 1);
    std::vector<double> v(d), w(n), out_s(d), out_p(d), scratch(n);
    for (double& x : v) x = rng.uniform(-1, 1);
    for (double& x : w) x = rng.uniform(-1, 1);

    {
        std::vector<double> a(d), b(d);
        const double ts = time_of([&] { linalg::serial::column_means(m, a); }, 20);
        const double tp = time_of([&] { linalg::column_means(m, b); }, 20);
        row("column_means", ts, tp, a == b);
    }
    {
        std::vector<double> a(n), b(n);
        const double ts = time_of([&] { linalg::serial::matvec(m, v, a); }, 20);
        const double tp = time_of([&] { linalg::matvec(m, v, b); }, 20);
        row("matvec", ts, tp, a == b);
    }
    {
        const double ts = time_of([&] { linalg::serial::matvec_transposed(m, w, out_s); }, 20);
        const double tp = time_of([&] { linalg::matvec_transposed(m, w, out_p); }, 20);
        row("matvec_transposed", ts, tp, out_s == out_p);
    }
    {
        const double ts = time_of([&] { linalg::serial::gram_apply(m, v, scratch, out_s); }, 20);
        const double tp = time_of([&] { linalg::gram_apply(m, v, scratch, out_p); }, 20);
        row("gram_apply", ts, tp, out_s == out_p);
    }
    {
        linalg::DenseMatrix ca(0, 0), cb(0, 0);
        const double ts = time_of([&] { ca = linalg::serial::covariance(m, n); }, 3);
        const double tp = time_of([&] { cb = linalg::covariance(m, n); }, 3);
        row("covariance", ts, tp, ca.data == cb.data);
    }
    {
        auto centered = linalg::center_rows(m);
        const double tp =
            time_of([&] { linalg::top_right_singular_vector(centered, 1e-10, 200, 7); }, 3);
        std::printf("%-28s %13s %10.3f ms        (openmp only)\n", "power_iteration(200 it)",
                    "-", tp * 1e3);
    }

    // batch forward/backward at 1 thread vs all threads (same results by the
    // fixed-order reductions; timed here rather than re-verified)
    {
        nnlab::NetworkConfig cfg;
        cfg.input = {16, 16, 1};
        cfg.layers = {nnlab::ConvSpec{6, 3, 2, nnlab::Activation::Relu}, nnlab::FlattenSpec{},
                      nnlab::DenseSpec{32, nnlab::Activation::Relu},
                      nnlab::DenseSpec{4, nnlab::Activation::Linear}};
        cfg.representation_layer = 2;
        cfg.num_classes = 4;
        cfg.seed = 5;
        auto net = nnlab::Network::init(cfg);
        const int bn = 64;
        std::vector<double> batch(static_cast<std::size_t>(bn) * 256);
        for (double& x : batch) x = rng.uniform01();
        std::vector<int> labels(bn);
        for (int i = 0; i < bn; ++i) labels[i] = i % 4;
        nnlab::Gradients g = net.zero_gradients();
        std::vector<double> g1, gk;

        const int max_threads = omp_get_max_threads();
        omp_set_num_threads(1);
        const double ts =
            time_of([&] { net.loss_and_gradients(batch, bn, labels, g); }, 50);
        g1 = g.weights[0];
        omp_set_num_threads(max_threads);
        const double tp =
            time_of([&] { net.loss_and_gradients(batch, bn, labels, g); }, 50);
        gk = g.weights[0];
        row("nn loss+grad (batch 64)", ts, tp, g1 == gk);
    }
    return 0;
}
