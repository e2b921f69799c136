#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "bandedge/moments.hpp"
#include "bandedge/reservoir.hpp"

using namespace bandedge;
using Catch::Matchers::WithinAbs;

namespace {
const ReservoirModel iso = ReservoirModel::isotropic();
const ReservoirModel aniso = ReservoirModel::anisotropic();
const ReservoirModel markov = ReservoirModel::markovian();
}  // namespace

TEST_CASE("isotropic kernel hand values") {
    SystemParams p;  // beta = 1, delta = delta_g = 0
    // at tau = 1/pi the sqrt(pi tau) factor is 1: K = e^{-i pi/4}
    const cplx k = kernel(iso, p, 1.0 / pi);
    CHECK_THAT(std::abs(k), WithinAbs(1.0, 1e-14));
    CHECK_THAT(std::arg(k), WithinAbs(-pi / 4.0, 1e-14));
}

TEST_CASE("anisotropic kernel hand value") {
    SystemParams p;  // beta_a = 1, delta = delta_g
    const cplx k = kernel(aniso, p, 1.0);
    const cplx want = std::exp(cplx(0.0, pi / 4.0)) / std::sqrt(pi);
    CHECK(std::abs(k - want) < 1e-14);
}

TEST_CASE("kernel modulus power laws and linear phase") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> taud(0.01, 5.0), dd(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        SystemParams p;
        p.delta_g = dd(rng);
        p.delta = dd(rng);
        const double tau = taud(rng);
        const double Delta = p.delta_g - p.delta;

        // |K_iso| ~ tau^{-1/2}: quadrupling tau halves the modulus
        CHECK_THAT(std::abs(kernel(iso, p, 4.0 * tau)) / std::abs(kernel(iso, p, tau)),
                   WithinAbs(0.5, 1e-12));
        // |K_aniso| ~ tau^{-3/2}
        CHECK_THAT(std::abs(kernel(aniso, p, 4.0 * tau)) / std::abs(kernel(aniso, p, tau)),
                   WithinAbs(0.125, 1e-12));

        // arg[K(tau) e^{+i Delta tau}] is tau-independent for both kernels
        auto dephased_iso = [&](double t) {
            return std::arg(kernel(iso, p, t) * std::exp(cplx(0.0, Delta * t)));
        };
        auto dephased_aniso = [&](double t) {
            return std::arg(kernel(aniso, p, t) * std::exp(cplx(0.0, Delta * t)));
        };
        CHECK_THAT(dephased_iso(tau) - dephased_iso(2.0 * tau), WithinAbs(0.0, 1e-12));
        CHECK_THAT(dephased_aniso(tau) - dephased_aniso(2.0 * tau), WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("kernel error paths") {
    SystemParams p;
    CHECK_THROWS_AS(kernel(iso, p, 0.0), NonPositiveTauError);
    CHECK_THROWS_AS(kernel(iso, p, -1.0), NonPositiveTauError);
    CHECK_THROWS_AS(kernel(markov, p, 1.0), MarkovianKernelNotPointwiseError);
}

TEST_CASE("ktilde closed-form values") {
    SystemParams p;  // beta = 1

    SECTION("isotropic at s = 1, delta = delta_g") {
        const cplx v = ktilde(iso, p, cplx(1.0, 0.0));
        CHECK(std::abs(v - std::exp(cplx(0.0, -pi / 4.0))) < 1e-14);
    }
    SECTION("markovian is the constant gamma1/2") {
        SystemParams q;
        q.gamma1 = 1.0;
        CHECK(std::abs(ktilde(markov, q, cplx(3.0, -2.0)) - cplx(0.5, 0.0)) < 1e-15);
        CHECK(std::abs(ktilde(markov, q, cplx(1e-12, 0.0)) - cplx(0.5, 0.0)) < 1e-15);
    }
    SECTION("anisotropic vanishes at threshold as s -> 0") {
        SystemParams q;  // delta = delta_g
        const cplx v = ktilde(aniso, q, cplx(1e-18, 0.0));
        CHECK(std::abs(v) < 1e-8);
    }
    SECTION("branch point rejected") {
        SystemParams q;
        q.delta_g = 1.0;
        q.delta = 0.0;  // branch point at s = -i
        CHECK_THROWS_AS(ktilde(iso, q, cplx(0.0, -1.0)), BranchPointSingularityError);
    }
}

TEST_CASE("branch consistency of the s -> 0 limit") {
    // Delta > 0: Ktilde(0) -> -i beta^{3/2}/sqrt(Delta); Delta < 0: +beta^{3/2}/sqrt(|Delta|)
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> xd(0.05, 6.0);
    for (int i = 0; i < 50; ++i) {
        const double x = xd(rng);
        SystemParams p;
        p.delta_g = x;
        p.delta = 0.0;  // Delta = x > 0
        const auto lim = ktilde_zero_limit(iso, p);
        REQUIRE(lim.finite);
        CHECK(std::abs(lim.value - cplx(0.0, -1.0 / std::sqrt(x))) < 1e-13);
        // the closed form evaluated just right of the axis converges to it
        const cplx near = ktilde(iso, p, cplx(1e-12, 0.0));
        CHECK(std::abs(near - lim.value) < 1e-5);

        p.delta_g = -x;  // Delta = -x < 0
        const auto lim2 = ktilde_zero_limit(iso, p);
        REQUIRE(lim2.finite);
        CHECK(std::abs(lim2.value - cplx(1.0 / std::sqrt(x), 0.0)) < 1e-13);
    }

    SystemParams thr;  // Delta = 0: divergent limit flagged, not evaluated
    CHECK_FALSE(ktilde_zero_limit(iso, thr).finite);
}

TEST_CASE("principal square root convention") {
    const double x = 2.3;
    CHECK(std::abs(principal_sqrt(cplx(0.0, x)) -
                   std::exp(cplx(0.0, pi / 4.0)) * std::sqrt(x)) < 1e-15);
    CHECK(std::abs(principal_sqrt(cplx(0.0, -x)) -
                   std::exp(cplx(0.0, -pi / 4.0)) * std::sqrt(x)) < 1e-15);
}

TEST_CASE("validate_laplace_pair: quadrature matches the closed form") {
    SystemParams p;
    p.delta_g = 1.0;
    p.delta = 0.0;  // Delta = 1
    const std::vector<cplx> grid = {{1.0, 0.0}};
    CHECK(validate_laplace_pair(iso, p, grid) < 1e-8);

    // transform decay: large Re s drives Ktilde (and the error) small
    const std::vector<cplx> far = {{50.0, 0.0}};
    CHECK(validate_laplace_pair(iso, p, far) < 1e-8);
    CHECK(std::abs(ktilde(iso, p, cplx(50.0, 0.0))) < 0.15);

    // markovian excluded by convention
    CHECK(validate_laplace_pair(markov, p, grid) == 0.0);
    // anisotropic pointwise kernel is non-integrable
    CHECK_THROWS_AS(validate_laplace_pair(aniso, p, grid), UnsupportedModelError);
}

TEST_CASE("laplace-pair quadrature error decreases under refinement") {
    SystemParams p;
    p.delta_g = 2.0;
    p.delta = 0.0;
    const cplx s(0.5, 0.5);
    // fixed panel counts, no convergence loop: errors must decrease
    std::vector<double> errs;
    for (const int panels : {8, 16, 32, 64}) {
        const cplx z = s + cplx(0.0, p.delta_g - p.delta);
        const cplx C = std::exp(cplx(0.0, -pi / 4.0)) / std::sqrt(pi);
        const double U = std::sqrt(42.0 / z.real());
        auto f = [&](double u) { return 2.0 * C * std::exp(-z * u * u); };
        const double du = U / panels;
        cplx acc = f(0.0) + f(U);
        for (int i = 1; i < panels; i += 2) acc += 4.0 * f(i * du);
        for (int i = 2; i < panels; i += 2) acc += 2.0 * f(i * du);
        errs.push_back(std::abs(acc * (du / 3.0) - ktilde(iso, p, s)));
    }
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) CHECK(errs[i] > errs[i + 1]);
}

TEST_CASE("kernel moments match Gauss-Legendre quadrature") {
    // independent oracle: 40-node Gauss-Legendre on each subinterval,
    // u-substitution on the singular first interval
    static const double gl_x[20] = {
        -0.9931285991850949, -0.9639719272779138, -0.9122344282513259,
        -0.8391169718222188, -0.7463319064601508, -0.6360536807265150,
        -0.5108670019508271, -0.3737060887154195, -0.2277858511416451,
        -0.0765265211334973, 0.0765265211334973,  0.2277858511416451,
        0.3737060887154195,  0.5108670019508271,  0.6360536807265150,
        0.7463319064601508,  0.8391169718222188,  0.9122344282513259,
        0.9639719272779138,  0.9931285991850949};
    static const double gl_w[20] = {
        0.0176140071391521, 0.0406014298003869, 0.0626720483341091,
        0.0832767415767048, 0.1019301198172404, 0.1181945319615184,
        0.1316886384491766, 0.1420961093183820, 0.1491729864726037,
        0.1527533871307258, 0.1527533871307258, 0.1491729864726037,
        0.1420961093183820, 0.1316886384491766, 0.1181945319615184,
        0.1019301198172404, 0.0832767415767048, 0.0626720483341091,
        0.0406014298003869, 0.0176140071391521};

    auto oracle = [&](double a, double b, double w, int pw) {
        // int_a^b tau^{pw - 1/2} e^{-i w tau} dtau (pw = 0 or 1), via u = sqrt(tau)
        const double ua = std::sqrt(a), ub = std::sqrt(b);
        cplx acc(0.0);
        for (int i = 0; i < 20; ++i) {
            const double u = 0.5 * (ub - ua) * gl_x[i] + 0.5 * (ua + ub);
            const double tau = u * u;
            cplx f = 2.0 * std::exp(cplx(0.0, -w * tau));
            if (pw == 1) f *= tau;
            acc += gl_w[i] * f;
        }
        return acc * 0.5 * (ub - ua);
    };

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> wd(-8.0, 8.0);
    std::uniform_int_distribution<int> jd(0, 1999);
    std::uniform_real_distribution<double> hd(-3.0, -1.0);
    for (int rep = 0; rep < 40; ++rep) {
        const double w = wd(rng);
        const double h = std::pow(10.0, hd(rng));
        const std::size_t j = static_cast<std::size_t>(jd(rng));
        const auto mom = isotropic_moments(1.0, w, h, j + 1);
        const double a = static_cast<double>(j) * h, b = a + h;
        const cplx C = std::exp(cplx(0.0, -pi / 4.0)) / std::sqrt(pi);
        const cplx q0 = C * oracle(a, b, w, 0);
        const cplx q1 = C * (oracle(a, b, w, 1) - a * oracle(a, b, w, 0)) / h;
        CHECK(std::abs(mom.p0[j] - q0) <= 1e-10 * std::abs(q0) + 1e-13);
        // p1 differences lose ~log10(j) digits to cancellation; the residual
        // absolute error stays far below the h^2 scheme error it feeds
        CHECK(std::abs(mom.p1[j] - q1) <= 1e-9 * std::abs(q1) + 5e-12);
    }

    // tiny-omega fallback joins smoothly with the faddeeva route
    for (const double w : {0.0, 1e-9, 1e-7, 2e-6}) {
        const auto mom = isotropic_moments(1.0, w, 0.01, 50);
        const cplx C = std::exp(cplx(0.0, -pi / 4.0)) / std::sqrt(pi);
        for (const std::size_t j : {std::size_t{0}, std::size_t{13}, std::size_t{49}}) {
            const double a = j * 0.01, b = a + 0.01;
            const cplx q0 = C * oracle(a, b, w, 0);
            CHECK(std::abs(mom.p0[j] - q0) < 1e-12);
        }
    }
}
