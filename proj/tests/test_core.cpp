#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ifm/core.hpp"
#include "test_util.hpp"

using namespace ifm;
using testutil::cdist;

namespace {
const ChannelLabel kA{ChannelKind::PhotonMode, "a"};
const ChannelLabel kB{ChannelKind::PhotonMode, "b"};
const ChannelLabel kE{ChannelKind::AbsorberExcited, "E"};
const ChannelLabel kLoss{ChannelKind::LossOrOutgoing, "loss"};
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}  // namespace

TEST_CASE("registry ordering and uniqueness") {
    auto reg = make_registry({kA, kB, kE});
    CHECK(reg->size() == 3);
    CHECK(reg->index_of("a") == 0);
    CHECK(reg->index_of("E") == 2);

    CHECK(make_registry({kA})->size() == 1);
    CHECK_THROWS_AS(make_registry({kA, kA}), DuplicateChannel);
    CHECK_THROWS_AS(make_registry({}), InvalidParameter);
    CHECK_THROWS_AS(reg->index_of("z"), ChannelNotInRegistry);
}

TEST_CASE("beamsplitter matrix at pi/4") {
    auto bs = make_beamsplitter(kA, kB, M_PI / 4);
    CHECK(cdist(bs.entry(0, 0), kInvSqrt2) < 1e-12);
    CHECK(cdist(bs.entry(0, 1), cdouble(0, kInvSqrt2)) < 1e-12);
    CHECK(cdist(bs.entry(1, 0), cdouble(0, kInvSqrt2)) < 1e-12);
    CHECK(cdist(bs.entry(1, 1), kInvSqrt2) < 1e-12);
}

TEST_CASE("beamsplitter limiting angles") {
    auto transmit = make_beamsplitter(kA, kB, 0.0);
    CHECK(cdist(transmit.entry(0, 0), 1.0) < 1e-15);
    CHECK(cdist(transmit.entry(0, 1), 0.0) < 1e-15);

    auto reg = make_registry({kA, kB});
    auto reflect = make_beamsplitter(kA, kB, M_PI / 2);
    auto out = apply(reflect, StateVector::basis(reg, "a"));
    CHECK(cdist(out.amplitude("a"), 0.0) < 1e-12);
    CHECK(cdist(out.amplitude("b"), cdouble(0, 1)) < 1e-12);
}

TEST_CASE("beamsplitter rejections") {
    CHECK_THROWS_AS(make_beamsplitter(kA, kE, M_PI / 4), InvalidChannelKind);
    CHECK_THROWS_AS(make_beamsplitter(kA, kB, -0.1), InvalidParameter);
    CHECK_THROWS_AS(make_beamsplitter(kA, kB, 2.0), InvalidParameter);
}

TEST_CASE("perfect absorber transfers amplitude to the excitation channel") {
    auto reg = make_registry({kA, kB, kE});
    StateVector mid(reg, {kInvSqrt2, cdouble(0, kInvSqrt2), 0.0});
    auto out = apply(make_perfect_absorber(kB, kE), mid);
    CHECK(cdist(out.amplitude("a"), kInvSqrt2) < 1e-12);
    CHECK(cdist(out.amplitude("b"), 0.0) < 1e-12);
    CHECK(cdist(out.amplitude("E"), cdouble(0, kInvSqrt2)) < 1e-12);

    // vacuum on the object mode: nothing moves
    auto idle = apply(make_perfect_absorber(kB, kE),
                      StateVector::basis(reg, "a"));
    CHECK(cdist(idle.amplitude("a"), 1.0) < 1e-15);
    CHECK(cdist(idle.amplitude("b"), 0.0) < 1e-15);
    CHECK(cdist(idle.amplitude("E"), 0.0) < 1e-15);
}

TEST_CASE("absorber block squares to minus identity on its pair") {
    auto reg = make_registry({kA, kB, kE});
    auto absorber = make_perfect_absorber(kB, kE);
    StateVector s(reg, {0.6, 0.48, cdouble(0, 0.64)});
    auto twice = apply(absorber, apply(absorber, s));
    CHECK(cdist(twice.amplitude("a"), 0.6) < 1e-12);
    CHECK(cdist(twice.amplitude("b"), -0.48) < 1e-12);
    CHECK(cdist(twice.amplitude("E"), cdouble(0, -0.64)) < 1e-12);

    CHECK_THROWS_AS(make_perfect_absorber(kE, kE), InvalidChannelKind);
    CHECK_THROWS_AS(make_perfect_absorber(kB, kLoss), InvalidChannelKind);
}

TEST_CASE("partial object limits and generic value") {
    auto transparent = make_partial_object(kB, 1.0, 0.0, kLoss);
    CHECK(cdist(transparent.entry(0, 0), 1.0) < 1e-15);
    CHECK(cdist(transparent.entry(1, 0), 0.0) < 1e-15);

    auto opaque = make_partial_object(kB, 0.0, 0.0, kLoss);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(cdist(opaque.entry(i, j),
                        make_perfect_absorber(kB, kE).entry(i, j)) < 1e-15);

    auto reg = make_registry({kB, kLoss});
    auto out = apply(make_partial_object(kB, 0.6, M_PI / 4, kLoss),
                     StateVector::basis(reg, "b"));
    // t e^{i chi} = 0.42426+0.42426i, sqrt(1-t^2) = 0.8
    CHECK(cdist(out.amplitude("b"), cdouble(0.42426406871192851,
                                            0.42426406871192851)) < 1e-12);
    CHECK(cdist(out.amplitude("loss"), 0.8) < 1e-12);

    CHECK_THROWS_AS(make_partial_object(kB, 1.2, 0.0, kLoss), InvalidParameter);
    CHECK_THROWS_AS(make_partial_object(kB, 0.5, 0.0, kE), InvalidChannelKind);
}

TEST_CASE("partial t=0 and perfect absorber agree on probability magnitudes") {
    std::mt19937 rng(7);
    auto reg = make_registry({kA, kB, kE, kLoss});
    for (int trial = 0; trial < 50; ++trial) {
        // photon on the interferometer modes, ancillas in vacuum
        auto photon = testutil::random_state(2, rng);
        StateVector s(reg, {photon[0], photon[1], 0.0, 0.0});
        double chi = std::uniform_real_distribution<double>(0, M_PI)(rng);
        auto via_absorber = apply(make_perfect_absorber(kB, kE), s);
        auto via_partial = apply(make_partial_object(kB, 0.0, chi, kLoss), s);
        CHECK(std::abs(std::norm(via_absorber.amplitude("b")) -
                       std::norm(via_partial.amplitude("b"))) < 1e-12);
        CHECK(std::abs(std::norm(via_absorber.amplitude("E")) -
                       std::norm(via_partial.amplitude("loss"))) < 1e-12);
    }
}

TEST_CASE("mirror redirect moves amplitude to the outgoing mode") {
    const ChannelLabel c{ChannelKind::LossOrOutgoing, "c"};
    auto reg = make_registry({kA, kB, c});
    auto out = apply(make_mirror_redirect(kB, c), StateVector::basis(reg, "b"));
    CHECK(cdist(out.amplitude("b"), 0.0) < 1e-15);
    CHECK(cdist(out.amplitude("c"), 1.0) < 1e-15);

    auto idle = apply(make_mirror_redirect(kB, c), StateVector::basis(reg, "a"));
    CHECK(cdist(idle.amplitude("c"), 0.0) < 1e-15);

    CHECK_THROWS_AS(make_mirror_redirect(kB, kE), InvalidChannelKind);
}

TEST_CASE("apply golden: first arrow of the bomb sequence") {
    auto reg = make_registry({kA, kB, kE});
    auto s1 = apply(make_beamsplitter(kA, kB, M_PI / 4),
                    StateVector::basis(reg, "a"));
    CHECK(cdist(s1.amplitude("a"), kInvSqrt2) < 1e-12);
    CHECK(cdist(s1.amplitude("b"), cdouble(0, kInvSqrt2)) < 1e-12);
    CHECK(cdist(s1.amplitude("E"), 0.0) < 1e-12);

    auto s2 = apply(make_perfect_absorber(kB, kE), s1);
    auto s3 = apply(make_beamsplitter(kA, kB, M_PI / 4), s2);
    CHECK(cdist(s3.amplitude("a"), 0.5) < 1e-12);
    CHECK(cdist(s3.amplitude("b"), cdouble(0, 0.5)) < 1e-12);
    CHECK(cdist(s3.amplitude("E"), cdouble(0, kInvSqrt2)) < 1e-12);
}

TEST_CASE("apply rejects channels outside the registry") {
    auto reg = make_registry({kA, kB});
    CHECK_THROWS_AS(apply(make_perfect_absorber(kB, kE),
                          StateVector::basis(reg, "a")),
                    ChannelNotInRegistry);
}

TEST_CASE("identity element leaves any state unchanged") {
    std::mt19937 rng(11);
    auto reg = make_registry({kA, kB, kE});
    StateVector s(reg, testutil::random_state(3, rng));
    auto out = apply(make_identity(kB), s);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(cdist(out.amplitudes()[i], s.amplitudes()[i]) == 0.0);
}

TEST_CASE("verify_unitary on constructors and a broken matrix") {
    CHECK(verify_unitary(make_beamsplitter(kA, kB, M_PI / 4)).ok);
    CHECK(verify_unitary(make_beamsplitter(kA, kB, M_PI / 4)).max_deviation <
          1e-15);
    CHECK(verify_unitary(make_perfect_absorber(kB, kE)).ok);

    // row scaled by 1.01: U^dag U - I picks up c^2 - 1 = 0.0201
    Element scaled(ElementKind::Custom, {kA, kB}, {1.01, 0.0, 0.0, 1.0});
    auto check = verify_unitary(scaled);
    CHECK(!check.ok);
    CHECK(check.max_deviation == doctest::Approx(0.0201).epsilon(1e-9));

    CHECK_THROWS_AS(verify_unitary(scaled, 0.0), InvalidParameter);
}

TEST_CASE("every constructor-produced element is unitary at 1e-10") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> angle(0, M_PI / 2);
    std::uniform_real_distribution<double> unit(0, 1);
    for (int i = 0; i < 100; ++i) {
        CHECK(verify_unitary(make_beamsplitter(kA, kB, angle(rng)), 1e-10).ok);
        CHECK(verify_unitary(make_partial_object(kB, unit(rng),
                                                 4 * angle(rng), kLoss),
                             1e-10)
                  .ok);
    }
}

TEST_CASE("property: unitary application preserves the norm") {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        auto reg = make_registry({kA, kB, kE, kLoss});
        StateVector s(reg, testutil::random_state(4, rng));
        Element u(ElementKind::Custom, {kA, kB, kLoss},
                  testutil::random_unitary(3, rng));
        auto out = apply(u, s);
        CHECK(std::abs(out.norm_squared() - 1.0) < 1e-10);
    }
}

TEST_CASE("property: elements on disjoint channels commute") {
    std::mt19937 rng(42);
    const ChannelLabel c{ChannelKind::PhotonMode, "c"};
    const ChannelLabel d{ChannelKind::PhotonMode, "d"};
    for (int trial = 0; trial < 100; ++trial) {
        auto reg = make_registry({kA, kB, c, d});
        StateVector s(reg, testutil::random_state(4, rng));
        Element u1(ElementKind::Custom, {kA, kB}, testutil::random_unitary(2, rng));
        Element u2(ElementKind::Custom, {c, d}, testutil::random_unitary(2, rng));
        auto ab = apply(u2, apply(u1, s));
        auto ba = apply(u1, apply(u2, s));
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(cdist(ab.amplitudes()[i], ba.amplitudes()[i]) < 1e-12);
    }
}

TEST_CASE("non-normalized amplitude vectors require the flag") {
    auto reg = make_registry({kA, kB});
    CHECK_THROWS_AS(StateVector(reg, {0.5, 0.5}), NotAState);
    StateVector diff(reg, {0.5, 0.5}, /*normalized=*/false);
    CHECK(!diff.normalized());
}
