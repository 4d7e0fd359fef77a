#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ocular/pupil.hpp"
#include "ocular/synth.hpp"

using namespace ocular;
using doctest::Approx;

namespace {

double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

EyeCorners corners_at(Point l, Point r) {
    EyeCorners c;
    c.left = l;
    c.right = r;
    return c;
}

SynthEyeSpec base_eye(int w = 50, int h = 25) {
    SynthEyeSpec s;
    s.width = w;
    s.height = h;
    s.pupil_center = {w / 2.0, h / 2.0};
    s.supersample = 3;
    return s;
}

}  // namespace

TEST_CASE("pupil center on a clean eye") {
    const SyntheticEye eye = synth_eye(50, 25, {25, 12}, 4, 8, 0.0);
    CHECK(dist(pupil_center(eye.image), eye.pupil_center) <= 1.0);
    CHECK(dist(pupil_center_peak(eye.image), eye.pupil_center) <= 2.0);
}

TEST_CASE("pupil center is exact on a mirror-symmetric eye") {
    SynthEyeSpec s = base_eye(61, 31);
    s.pupil_center = {30, 15};
    s.left_corner = Point{1, 15};
    s.right_corner = Point{59, 15};
    s.supersample = 1;
    const SyntheticEye eye = synth_eye(s);
    REQUIRE(mirror_horizontal(eye.image) == eye.image);
    CHECK(pupil_center(eye.image).x == Approx(30.0).epsilon(1e-12));
}

TEST_CASE("partial occlusion keeps the column estimate") {
    const SyntheticEye eye = synth_eye(50, 25, {25, 12}, 4, 8, 0.4);
    CHECK(std::abs(pupil_center(eye.image).x - 25.0) <= 2.0);
}

TEST_CASE("pupil center rejects a constant image") {
    CHECK_THROWS_AS(pupil_center(GrayImage(30, 20, 100.0)), DegenerateInput);
    CHECK_THROWS_AS(pupil_center_peak(GrayImage(30, 20, 100.0)), DegenerateInput);
    CHECK_THROWS_AS(pupil_center(GrayImage()), InvalidArgument);
}

TEST_CASE("pupil center is intensity-scale invariant") {
    const SyntheticEye eye = synth_eye(50, 25, {23, 12}, 4, 8, 0.1);
    const Point a = pupil_center(eye.image);
    const Point b = pupil_center(scale_intensity(eye.image, 0.5));
    CHECK(dist(a, b) < 1e-9);
}

TEST_CASE("pupil center follows a translated eye") {
    SynthEyeSpec s = base_eye(60, 30);
    s.supersample = 1;
    s.left_corner = Point{6, 15};
    s.right_corner = Point{54, 15};
    const Point a = pupil_center(synth_eye(s).image);
    for (auto [dx, dy] : {std::pair{2, 0}, std::pair{-3, 1}, std::pair{1, -2}}) {
        SynthEyeSpec t = s;
        t.pupil_center.x += dx;
        t.pupil_center.y += dy;
        t.left_corner->x += dx;
        t.left_corner->y += dy;
        t.right_corner->x += dx;
        t.right_corner->y += dy;
        const Point b = pupil_center(synth_eye(t).image);
        CHECK(std::abs(b.x - a.x - dx) <= 0.5);
        CHECK(std::abs(b.y - a.y - dy) <= 0.5);
    }
}

TEST_CASE("COM beats the peak on specular eyes") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double com = 0.0, peak = 0.0;
    for (int i = 0; i < 40; ++i) {
        SynthEyeSpec s = base_eye(100, 50);
        s.pupil_radius = 6.0 + 2.0 * u(rng);
        s.iris_radius = 2.0 * s.pupil_radius;
        s.pupil_center = {40.0 + 20.0 * u(rng), 23.0 + 4.0 * u(rng)};
        const double side = u(rng) < 0.5 ? -1.0 : 1.0;
        s.specular_center = {s.pupil_center.x + side * 0.6 * s.pupil_radius, s.pupil_center.y - 0.4 * s.pupil_radius};
        s.specular_radius = 2.0;
        const SyntheticEye eye = synth_eye(s);
        com += dist(pupil_center(eye.image), eye.pupil_center);
        peak += dist(pupil_center_peak(eye.image), eye.pupil_center);
    }
    CHECK(com <= peak);
}

TEST_CASE("pupil diameter") {
    SynthEyeSpec s = base_eye(60, 30);
    s.pupil_radius = 6;
    s.iris_radius = 11;
    const SyntheticEye eye = synth_eye(s);
    const PupilGeometry g = pupil_diameter(eye.image, eye.pupil_center);
    CHECK(g.diameter == Approx(12.0).epsilon(0.10));
    const PupilGeometry g2 = pupil_diameter(scale_intensity(eye.image, 2.0), eye.pupil_center);
    CHECK(g2.diameter == Approx(g.diameter).epsilon(1e-9));

    SynthEyeSpec tiny = base_eye();
    tiny.pupil_radius = 1;
    const SyntheticEye t = synth_eye(tiny);
    const double d = pupil_diameter(t.image, t.pupil_center).diameter;
    CHECK(d >= 2.0);
    CHECK(d <= 4.0);

    CHECK_THROWS_AS(pupil_diameter(GrayImage(40, 20, 50.0), {20, 10}), DegenerateInput);
}

TEST_CASE("eye corners") {
    SynthEyeSpec s = base_eye(61, 31);
    s.pupil_center = {30.5, 15.5};
    s.left_corner = Point{1, 15};
    s.right_corner = Point{59, 15};
    s.supersample = 1;
    const SyntheticEye eye = synth_eye(s);
    const EyeCorners c = eye_corners(eye.image);
    CHECK(dist(c.left, eye.left_corner) <= 2.0);
    CHECK(dist(c.right, eye.right_corner) <= 2.0);
    CHECK(c.left.x < c.right.x);

    const EyeCorners m = eye_corners(mirror_horizontal(eye.image));
    CHECK(m.left.x == Approx(60 - c.right.x));
    CHECK(m.left.y == Approx(c.right.y));
    CHECK(m.right.x == Approx(60 - c.left.x));

    CHECK_THROWS_AS(eye_corners(GrayImage(40, 20, 128.0)), DegenerateInput);
}

TEST_CASE("relative position along the corner axis") {
    const EyeCorners c = corners_at({0, 0}, {40, 0});
    RelativePosition r = relative_position({20, 0}, c);
    CHECK(r.distance == Approx(0.0));
    CHECK(r.angle == Approx(0.0));
    CHECK(relative_position({40, 0}, c).angle == Approx(60.0));
    CHECK(relative_position({0, 0}, c).angle == Approx(-60.0));
    CHECK(relative_position({25, 0}, c).angle == Approx(15.0));
    CHECK(relative_position({25, 0}, c, 30.0).angle == Approx(7.5));
    CHECK_THROWS_AS(relative_position({1, 1}, corners_at({3, 3}, {3, 3})), InvalidArgument);
}

TEST_CASE("relative position is rotation invariant") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    for (int i = 0; i < 50; ++i) {
        const Point l{u(rng), u(rng)}, r{l.x + 40.0 + u(rng), l.y + u(rng) * 0.2};
        const Point p{u(rng), u(rng)};
        const double th = u(rng) * std::numbers::pi / 30.0;
        auto rot = [th](Point q) {
            return Point{q.x * std::cos(th) - q.y * std::sin(th), q.x * std::sin(th) + q.y * std::cos(th)};
        };
        const RelativePosition a = relative_position(p, corners_at(l, r));
        const RelativePosition b = relative_position(rot(p), corners_at(rot(l), rot(r)));
        CHECK(b.angle == Approx(a.angle).epsilon(1e-9));
        CHECK(b.distance == Approx(a.distance).epsilon(1e-9));
    }
}

TEST_CASE("hit test uses a closed disc") {
    CHECK(hit_test({5, 5}, {5, 5}, 4.0));
    CHECK(hit_test({5, 9}, {5, 5}, 4.0));
    CHECK(hit_test({8, 9}, {5, 5}, 5.0));
    CHECK_FALSE(hit_test({5, 9.1}, {5, 5}, 4.0));
}

TEST_CASE("centroid of a profile") {
    const std::vector<double> p{1, 1, 2, 3, 2, 1, 1};
    CHECK(profile_centroid(p, 2, 0.01) == Approx(3.0));
    const std::vector<double> q{1, 1, 2, 4, 4, 1, 1};
    CHECK(profile_centroid(q, 2, 0.01) == Approx(3.5));
}

TEST_CASE("ocular parameters are validated") {
    OcularParams p;
    CHECK_NOTHROW(validate(p));
    p.gamma = 0.0;
    CHECK_THROWS_AS(validate(p), InvalidArgument);
    p = {};
    p.zone_halfwidth_frac = 1.2;
    CHECK_THROWS_AS(validate(p), InvalidArgument);
}
