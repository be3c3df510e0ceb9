#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "cca/analytic.hpp"
#include "cca/errors.hpp"
#include "cca/model.hpp"

using namespace cca;

namespace {

ModelParams make_params(double omega_atom, double omega_cavity, double coupling) {
    ModelParams p;
    p.omega_atom = omega_atom;
    p.omega_cavity = omega_cavity;
    p.coupling = coupling;
    p.cavities = 3;  // pole equations do not depend on n
    return validate(p);
}

} // namespace

TEST_CASE("pole functions enforce their out-of-band domains") {
    const ModelParams p = make_params(11.0, 10.0, 1.3);
    CHECK_THROWS_AS(pole_function_upper(p, 11.0), DomainError);
    CHECK_THROWS_AS(pole_function_upper(p, 8.0), DomainError);
    CHECK_THROWS_AS(pole_function_lower(p, 9.0), DomainError);
    CHECK_NOTHROW(pole_function_upper(p, 12.5));
    CHECK_NOTHROW(pole_function_lower(p, 7.5));
}

TEST_CASE("pole functions diverge toward the band edges") {
    const ModelParams p = make_params(11.0, 10.0, 1.3);
    CHECK(pole_function_upper(p, 12.0 + 1e-12) < -1e4);
    CHECK(pole_function_lower(p, 8.0 - 1e-12) > 1e4);
}

TEST_CASE("decoupled pole function reduces to x - Omega") {
    const ModelParams p = make_params(14.0, 10.0, 0.0);
    CHECK(pole_function_upper(p, 14.0) == doctest::Approx(0.0));
    CHECK(pole_function_upper(p, 13.0) == doctest::Approx(-1.0));
    // in-band atom with J = 0: no root in the upper bracket
    const ModelParams q = make_params(11.0, 10.0, 0.0);
    CHECK(pole_function_upper(q, 12.0 + 1e-9) > 0.0);
    CHECK_THROWS_AS(find_poles(q), PoleNotFound);
}

TEST_CASE("weak-coupling poles sit at the perturbative positions") {
    const ModelParams p = make_params(20.0, 20.0, 0.3);
    const BoundStateSolution sol = find_poles(p);
    CHECK(std::abs(sol.x1 - 22.00050625) < 1e-6);
    CHECK(std::abs(sol.x2 - 17.99949375) < 1e-6);
    CHECK(std::abs(sol.residual_upper) <= 1e-10);
    CHECK(std::abs(sol.residual_lower) <= 1e-10);
}

TEST_CASE("reference poles: pole gap near 4.42 for the strong-coupling set") {
    const ModelParams p = make_params(11.0, 10.0, 1.3);
    const BoundStateSolution sol = find_poles(p);
    CHECK(sol.x1 > 12.0);
    CHECK(sol.x2 < 8.0);
    CHECK(sol.phi == doctest::Approx(4.430544).epsilon(1e-5));
    CHECK(std::abs(sol.phi - 4.42) < 0.05);
    CHECK(sol.phi > 4.0);
}

TEST_CASE("pole reflection symmetry under detuning flip") {
    const BoundStateSolution a = find_poles(make_params(10.7, 10.0, 0.8));
    const BoundStateSolution b = find_poles(make_params(9.3, 10.0, 0.8));
    CHECK(a.x1 - 10.0 == doctest::Approx(10.0 - b.x2).epsilon(1e-10));
    CHECK(a.x2 - 10.0 == doctest::Approx(10.0 - b.x1).epsilon(1e-10));
    CHECK(a.a1 == doctest::Approx(b.a2).epsilon(1e-8));
}

TEST_CASE("far out-of-band atom with weak coupling loses one pole") {
    const ModelParams p = make_params(17.0, 10.0, 0.03);
    CHECK_THROWS_AS(find_poles(p), PoleNotFound);
}

TEST_CASE("weak-coupling residues match the perturbative weights to higher order") {
    const ModelParams p = make_params(20.0, 20.0, 0.3);
    const BoundStateSolution sol = find_poles(p);
    const double expected = 0.0081 / 16.0;  // J^4 / (2 Omega_+^3 xi)
    CHECK(std::abs(sol.a1 - expected) < 2e-6);
    CHECK(std::abs(sol.a2 - expected) < 2e-6);
    CHECK(sol.a1 == doctest::Approx(sol.a2).epsilon(1e-10));
}

TEST_CASE("branch-cut density is nonnegative and vanishes at the edges") {
    const ModelParams p = make_params(11.0, 10.0, 1.3);
    CHECK(branch_cut_density(p, 2.0) == 0.0);
    CHECK(branch_cut_density(p, -2.0) == 0.0);
    for (double x = -1.95; x < 2.0; x += 0.05) {
        CHECK(branch_cut_density(p, x) >= 0.0);
    }
}

TEST_CASE("sum rule: pole weights plus cut integral give unity") {
    const ModelParams p = make_params(11.0, 10.0, 1.3);
    const BoundStateSolution sol = find_poles(p);
    const std::complex<double> cut0 = branch_cut_integral(p, 0.0);
    CHECK(std::abs(cut0.imag()) < 1e-9);
    CHECK(std::abs(sol.a1 + sol.a2 + cut0.real() - 1.0) < 1e-6);
}

TEST_CASE("sum rule holds across a random in-band parameter sweep") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> in_band(-1.9, 1.9);
    std::uniform_real_distribution<double> couplings(0.05, 1.0);
    for (int i = 0; i < 100; ++i) {
        const ModelParams p = make_params(10.0 + in_band(rng), 10.0, couplings(rng));
        const BoundStateSolution sol = find_poles(p);
        const std::complex<double> cut0 = branch_cut_integral(p, 0.0);
        CHECK(std::abs(sol.a1 + sol.a2 + cut0.real() - 1.0) < 1e-6);
    }
}

TEST_CASE("cut contribution decays from its initial value") {
    const ModelParams p = make_params(11.0, 10.0, 1.3);
    const double at0 = std::abs(branch_cut_integral(p, 0.0));
    const double late = std::abs(branch_cut_integral(p, 200.0));
    CHECK(late < 1e-2 * at0);
}

TEST_CASE("cut integral vanishes without coupling") {
    const ModelParams p = make_params(11.0, 10.0, 0.0);
    CHECK(std::abs(branch_cut_integral(p, 0.0)) == 0.0);
    CHECK(std::abs(branch_cut_integral(p, 37.0)) == 0.0);
}

TEST_CASE("alpha(0) reproduces the initial condition") {
    const ModelParams p = make_params(11.0, 10.0, 1.3);
    const BoundStateSolution sol = find_poles(p);
    CHECK(std::abs(alpha_analytic(p, sol, 0.0) - 1.0) < 1e-6);
}

TEST_CASE("long-time population follows the two-pole interference law") {
    const ModelParams p = make_params(11.0, 10.0, 1.3);
    const BoundStateSolution sol = find_poles(p);
    const double t = 400.0;  // cut long gone
    const double pe = std::norm(alpha_analytic(p, sol, t));
    CHECK(pe == doctest::Approx(pe_longtime(sol, t)).epsilon(1e-4));
}

TEST_CASE("pe_longtime extrema, period and mean") {
    const ModelParams p = make_params(11.0, 10.0, 1.3);
    const BoundStateSolution sol = find_poles(p);
    const double period = 2.0 * std::numbers::pi / sol.phi;
    double lo = 2.0;
    double hi = -1.0;
    double mean = 0.0;
    const int samples = 20000;
    for (int i = 0; i < samples; ++i) {
        const double v = pe_longtime(sol, i * period / samples);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        mean += v;
    }
    mean /= samples;
    const double a1 = sol.a1;
    const double a2 = sol.a2;
    CHECK(hi == doctest::Approx((a1 + a2) * (a1 + a2)).epsilon(1e-6));
    CHECK(lo == doctest::Approx((a1 - a2) * (a1 - a2)).epsilon(1e-4));
    CHECK(mean == doctest::Approx(a1 * a1 + a2 * a2).epsilon(1e-6));
    CHECK(pe_longtime(sol, 0.0) == doctest::Approx(pe_longtime(sol, period)).epsilon(1e-12));
}

TEST_CASE("pe_longtime stays within [0, 1] in the weak-coupling regime") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> in_band(-1.5, 1.5);
    std::uniform_real_distribution<double> couplings(0.05, 0.6);
    std::uniform_real_distribution<double> times(0.0, 100.0);
    for (int i = 0; i < 50; ++i) {
        const ModelParams p = make_params(10.0 + in_band(rng), 10.0, couplings(rng));
        const BoundStateSolution sol = find_poles(p);
        REQUIRE(std::abs(sol.a1) + std::abs(sol.a2) <= 1.0);
        for (int k = 0; k < 20; ++k) {
            const double v = pe_longtime(sol, times(rng));
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("perturbative solution: zeroth order, reference value, J to 0") {
    const ModelParams p = make_params(11.0, 10.0, 1.3);
    const PerturbativeSolution ps = perturbative_solution(p);
    CHECK(ps.x01 == 12.0);
    CHECK(ps.x02 == 8.0);
    // Omega_+ = 1, Omega_- = -3: C1 - C2 = 1/4 + 1/36 = 5/18
    CHECK(ps.c1 - ps.c2 == doctest::Approx(5.0 / 18.0).epsilon(1e-12));
    CHECK(ps.phi == doctest::Approx(4.0 + 5.0 / 18.0 * std::pow(1.3, 4)).epsilon(1e-12));
    CHECK(ps.phi == doctest::Approx(4.7934).epsilon(1e-4));

    const PerturbativeSolution weak = perturbative_solution(make_params(11.0, 10.0, 1e-4));
    CHECK(weak.phi == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("perturbative gap coefficient equals the closed form") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> in_band(-1.8, 1.8);
    for (int i = 0; i < 50; ++i) {
        const double detuning = in_band(rng);
        const ModelParams p = make_params(10.0 + detuning, 10.0, 0.4);
        const PerturbativeSolution ps = perturbative_solution(p);
        const double d = -detuning;  // omega_0 - Omega
        const double closed = (d * d + 4.0) / (2.0 * std::pow(d * d - 4.0, 2));
        CHECK(ps.c1 - ps.c2 == doctest::Approx(closed).epsilon(1e-10));
    }
}

TEST_CASE("perturbative solution rejects band-edge degeneracy") {
    CHECK_THROWS_AS(perturbative_solution(make_params(12.0, 10.0, 0.3)), DomainError);
    CHECK_THROWS_AS(perturbative_solution(make_params(8.0, 10.0, 0.3)), DomainError);
}

TEST_CASE("exact pole gap converges to the perturbative gap at first order in J^4") {
    // |phi_exact - 4 xi| is first order in J^4: halving J shrinks it ~16x;
    // the remainder |phi_exact - phi_pert| is the next order and shrinks ~256x
    const auto gap_errors = [&](double coupling) {
        const ModelParams p = make_params(11.0, 10.0, coupling);
        const BoundStateSolution sol = find_poles(p);
        const PerturbativeSolution ps = perturbative_solution(p);
        return std::pair{std::abs(sol.phi - 4.0), std::abs(sol.phi - ps.phi)};
    };
    const auto [first_big, second_big] = gap_errors(0.1);
    const auto [first_small, second_small] = gap_errors(0.05);
    const double first_ratio = first_big / first_small;
    CHECK(first_ratio > 12.0);
    CHECK(first_ratio < 20.0);
    CHECK(second_big / second_small > 100.0);
}

TEST_CASE("perturbative uncertainty scales as 1/sqrt(T)") {
    const ModelParams p = make_params(20.5, 20.0, 0.3);
    const double t = 17.0;
    const double one = perturbative_uncertainty(p, t, 120.0);
    const double two = perturbative_uncertainty(p, t, 240.0);
    CHECK(two == doctest::Approx(one / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("perturbative uncertainty rejects band-edge parameters") {
    CHECK_THROWS_AS(perturbative_uncertainty(make_params(22.0, 20.0, 0.3), 1.0, 10.0),
                    DomainError);
}

TEST_CASE("at cos(phi t) = 1 the B3 root keeps only its cosine terms") {
    const ModelParams p = make_params(20.5, 20.0, 0.3);
    const PerturbativeSolution ps = perturbative_solution(p);
    const double t = 4.0 * std::numbers::pi / ps.phi;  // sin = 0, cos = 1
    const double op = 2.0 + 20.0 - 20.5;
    const double on = -2.0 + 20.0 - 20.5;
    const double b3_sqrt_cos = -3.0 / std::pow(on, 7) - 3.0 / std::pow(op, 7)
                               + 3.0 / (std::pow(on, 4) * std::pow(op, 3))
                               + 3.0 / (std::pow(on, 3) * std::pow(op, 4));
    const double j8 = std::pow(0.3, 8);
    const double b1 = -j8 / (4.0 * std::pow(on, 6)) - j8 / (4.0 * std::pow(op, 6))
                      + j8 / (2.0 * std::pow(on, 3) * std::pow(op, 3)) + 1.0;
    const double b2 = 1.0 / std::pow(on, 6) + 1.0 / std::pow(op, 6)
                      - 2.0 / (std::pow(on, 3) * std::pow(op, 3));
    const double expected = t * b1 * b2 / (j8 * 120.0 * b3_sqrt_cos * b3_sqrt_cos);
    CHECK(perturbative_uncertainty_squared(p, t, 120.0)
          == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("perturbative uncertainty leaves its regime at strong coupling") {
    // reference strong-coupling overlay set: delta^2 < 0 throughout
    const ModelParams p = make_params(20.5, 20.0, 3.0);
    const double d2 = perturbative_uncertainty_squared(p, 5.0, 120.0);
    CHECK(d2 < 0.0);
    CHECK_THROWS_AS(perturbative_uncertainty(p, 5.0, 120.0), DomainError);
}

TEST_CASE("solution scales exactly with the hopping unit") {
    // frequencies in units of xi: halving xi and all frequencies halves the
    // poles and phi, and leaves the dimensionless weights unchanged
    const BoundStateSolution ref = find_poles(make_params(11.0, 10.0, 1.3));
    ModelParams scaled;
    scaled.omega_atom = 5.5;
    scaled.omega_cavity = 5.0;
    scaled.coupling = 0.65;
    scaled.xi = 0.5;
    scaled.cavities = 3;
    const BoundStateSolution half = find_poles(validate(scaled));
    CHECK(half.x1 == doctest::Approx(0.5 * ref.x1).epsilon(1e-12));
    CHECK(half.x2 == doctest::Approx(0.5 * ref.x2).epsilon(1e-12));
    CHECK(half.phi == doctest::Approx(0.5 * ref.phi).epsilon(1e-12));
    CHECK(half.a1 == doctest::Approx(ref.a1).epsilon(1e-10));
    CHECK(half.a2 == doctest::Approx(ref.a2).epsilon(1e-10));
    // the cut contribution at rescaled time matches as well
    const std::complex<double> cut_ref = branch_cut_integral(
        make_params(11.0, 10.0, 1.3), 7.0);
    const std::complex<double> cut_half = branch_cut_integral(validate(scaled), 14.0);
    CHECK(std::abs(cut_ref - cut_half) < 1e-7);
}

TEST_CASE("poles stay strictly outside the band across a sweep") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> in_band(-1.9, 1.9);
    std::uniform_real_distribution<double> couplings(0.05, 1.0);
    for (int i = 0; i < 60; ++i) {
        const ModelParams p = make_params(10.0 + in_band(rng), 10.0, couplings(rng));
        const BoundStateSolution sol = find_poles(p);
        CHECK(sol.x1 > 12.0);
        CHECK(sol.x2 < 8.0);
        CHECK(sol.phi > 4.0);
        // roots are located to better than 1e-9 in frequency: the residual
        // changes sign inside a +-1e-9 bracket around each returned pole
        CHECK(pole_function_upper(p, sol.x1 - 1e-9) < 0.0);
        CHECK(pole_function_upper(p, sol.x1 + 1e-9) > 0.0);
        CHECK(pole_function_lower(p, sol.x2 - 1e-9) < 0.0);
        CHECK(pole_function_lower(p, sol.x2 + 1e-9) > 0.0);
    }
}
