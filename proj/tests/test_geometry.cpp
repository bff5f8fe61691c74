#include "doctest.h"
#include "scanforge/geometry.hpp"
#include "scanforge_ref/oracles.hpp"
#include "test_support.hpp"

using namespace scanforge;
using test::random_transform;
using test::transform_diff;
using test::vec_close;

TEST_CASE("compose basics") {
    RigidTransform shift = RigidTransform::from_translation({0, 2, 0});
    RigidTransform out = compose(RigidTransform::identity(), shift);
    CHECK(vec_close(out.translation, {0, 2, 0}, 1e-12));

    RigidTransform a = RigidTransform::from_translation({1, 0, 0});
    RigidTransform b = RigidTransform::from_translation({0, 2, 0});
    CHECK(vec_close(compose(a, b).translation, {1, 2, 0}, 1e-12));
}

TEST_CASE("compose rotation then translation matches the matrix oracle") {
    RigidTransform rot{Rotation3::yaw_deg(90.0), {}};
    RigidTransform shift = RigidTransform::from_translation({1, 0, 0});
    RigidTransform composed = compose(rot, shift);

    Vec3 at_origin = apply(composed, {0, 0, 0});
    CHECK(vec_close(at_origin, {0, 1, 0}, 1e-12));

    ref::Mat4 oracle = ref::Mat4::from_transform(rot) * ref::Mat4::from_transform(shift);
    CHECK(ref::max_abs_diff(oracle, composed) < 1e-12);
}

TEST_CASE("apply examples") {
    CHECK(vec_close(apply(RigidTransform::identity(), {3, 4, 5}), {3, 4, 5}, 0.0));
    CHECK(vec_close(apply(RigidTransform::from_translation({1, 1, 0}), {0, 0, 0}),
                    {1, 1, 0}, 0.0));
    RigidTransform t = RigidTransform::from_yaw_translation(90.0, {1, 0, 0});
    CHECK(vec_close(apply(t, {1, 0, 0}), {1, 1, 0}, 1e-12));
}

TEST_CASE("invert examples") {
    CHECK(transform_diff(invert(RigidTransform::identity()),
                         RigidTransform::identity()) < 1e-12);
    CHECK(vec_close(invert(RigidTransform::from_translation({1, 2, 3})).translation,
                    {-1, -2, -3}, 1e-12));

    RigidTransform t = RigidTransform::from_yaw_translation(90.0, {1, 0, 0});
    RigidTransform inv = invert(t);
    RigidTransform expected = RigidTransform::from_yaw_translation(-90.0, {0, 1, 0});
    CHECK(transform_diff(inv, expected) < 1e-12);

    ref::Mat4 oracle_inverse = ref::Mat4::from_transform(t).inverted();
    CHECK(ref::max_abs_diff(oracle_inverse, inv) < 1e-9);
}

TEST_CASE("compose is associative and invert round-trips") {
    Rng rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        RigidTransform a = random_transform(rng);
        RigidTransform b = random_transform(rng);
        RigidTransform c = random_transform(rng);
        CHECK(transform_diff(compose(compose(a, b), c), compose(a, compose(b, c))) <
              1e-9);

        Vec3 p{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
        CHECK(vec_close(apply(invert(a), apply(a, p)), p, 1e-9));
        CHECK(transform_diff(compose(invert(a), a), RigidTransform::identity()) < 1e-9);
    }
}

TEST_CASE("rotation constructor re-orthonormalizes and rejects junk") {
    Mat3 nearly = {{{1.0 + 5e-7, 0, 0}, {0, 1.0 - 5e-7, 2e-7}, {0, 0, 1.0}}};
    Rotation3 fixed = Rotation3::from_matrix(nearly);
    CHECK(fixed.is_orthonormal(1e-9));

    Mat3 garbage = {{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}};
    CHECK_THROWS_AS(Rotation3::from_matrix(garbage), DegenerateGeometry);

    Mat3 mirrored = {{{-1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    CHECK_THROWS_AS(Rotation3::from_matrix(mirrored), DegenerateGeometry);
}

TEST_CASE("polygon_area examples") {
    Polygon2 square({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(square.area() == doctest::Approx(1.0).epsilon(1e-12));

    Polygon2 triangle({{0, 0}, {4, 0}, {0, 3}});
    CHECK(triangle.area() == doctest::Approx(6.0).epsilon(1e-12));

    Polygon2 lshape({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
    CHECK(lshape.area() == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("polygon validation rejects degenerate input") {
    CHECK_THROWS_AS(Polygon2({{0, 0}, {1, 0}}), DegenerateGeometry);
    CHECK_THROWS_AS(Polygon2({{0, 0}, {0, 1}, {1, 0}}), DegenerateGeometry);  // CW
    CHECK_THROWS_AS(Polygon2({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), DegenerateGeometry);
}

TEST_CASE("polygon_area invariant under cyclic rotation and translation") {
    std::vector<Vec2> verts = {{0, 0}, {3, 0}, {3, 2}, {2, 2}, {2, 3}, {0, 3}};
    double base = Polygon2(verts).area();
    Rng rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        size_t shift = size_t(rng.next_below(verts.size()));
        Vec2 offset{rng.uniform(-20, 20), rng.uniform(-20, 20)};
        std::vector<Vec2> moved;
        for (size_t i = 0; i < verts.size(); ++i)
            moved.push_back(verts[(i + shift) % verts.size()] + offset);
        CHECK(Polygon2(moved).area() == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("polygon contains handles interior, boundary and holes in L-shape") {
    Polygon2 lshape({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
    CHECK(lshape.contains({0.5, 0.5}));
    CHECK(lshape.contains({1.0, 0.5}));   // on the inner edge extension, interior
    CHECK(lshape.contains({2.0, 0.5}));   // boundary
    CHECK_FALSE(lshape.contains({1.5, 1.5}));  // cut-out corner
    CHECK_FALSE(lshape.contains({3.0, 0.5}));
}

TEST_CASE("aabb_gap examples") {
    Aabb a = Aabb::from_center_size({0, 0, 0}, {1, 1, 1});
    Aabb touching = Aabb::from_center_size({1, 0, 0}, {1, 1, 1});
    CHECK(aabb_gap(a, touching) == 0.0);

    Aabb apart = Aabb::from_center_size({3, 0, 0}, {1, 1, 1});
    CHECK(aabb_gap(a, apart) == doctest::Approx(2.0).epsilon(1e-12));

    Aabb diagonal = Aabb::from_center_size({2, 2, 0}, {1, 1, 1});
    CHECK(aabb_gap(a, diagonal) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("aabb_gap agrees with dense surface sampling") {
    Aabb a = Aabb::from_center_size({0, 0, 0}, {1.2, 0.8, 0.6});
    Aabb b = Aabb::from_center_size({1.7, 1.1, 0.4}, {0.9, 0.7, 1.0});
    double closed_form = aabb_gap(a, b);

    double best = 1e9;
    const int kSteps = 24;
    auto surface_points = [&](const Aabb& box, auto&& emit) {
        for (int i = 0; i <= kSteps; ++i) {
            for (int j = 0; j <= kSteps; ++j) {
                double fx = box.min.x + (box.max.x - box.min.x) * i / kSteps;
                double fy = box.min.y + (box.max.y - box.min.y) * j / kSteps;
                double fz = box.min.z + (box.max.z - box.min.z) * j / kSteps;
                double fy2 = box.min.y + (box.max.y - box.min.y) * i / kSteps;
                emit(Vec3{fx, fy, box.min.z});
                emit(Vec3{fx, fy, box.max.z});
                emit(Vec3{fx, box.min.y, fz});
                emit(Vec3{fx, box.max.y, fz});
                emit(Vec3{box.min.x, fy2, fz});
                emit(Vec3{box.max.x, fy2, fz});
            }
        }
    };
    std::vector<Vec3> pa, pb;
    surface_points(a, [&](const Vec3& p) { pa.push_back(p); });
    surface_points(b, [&](const Vec3& p) { pb.push_back(p); });
    for (const Vec3& p : pa)
        for (const Vec3& q : pb) best = std::min(best, distance(p, q));

    CHECK(closed_form <= best + 1e-9);
    CHECK(best - closed_form < 0.12);  // sampling resolution slack
}

TEST_CASE("aabb_gap is symmetric and zero exactly when boxes intersect") {
    Rng rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        Aabb a = Aabb::from_center_size(
            {rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)},
            {rng.uniform(0.2, 2), rng.uniform(0.2, 2), rng.uniform(0.2, 2)});
        Aabb b = Aabb::from_center_size(
            {rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)},
            {rng.uniform(0.2, 2), rng.uniform(0.2, 2), rng.uniform(0.2, 2)});
        double g1 = aabb_gap(a, b);
        CHECK(g1 == aabb_gap(b, a));
        CHECK((g1 == 0.0) == a.intersects(b));
    }
}

TEST_CASE("clockwise_angle_deg examples") {
    CHECK(clockwise_angle_deg({0, 1}, {1, 0}) == doctest::Approx(90.0).epsilon(1e-12));
    CHECK(clockwise_angle_deg({0, 1}, {0, -1}) ==
          doctest::Approx(180.0).epsilon(1e-12));

    // target at 80 degrees clockwise from front=(1,0)
    double rad = deg_to_rad(-80.0);
    Vec2 target{std::cos(rad), std::sin(rad)};
    CHECK(clockwise_angle_deg({1, 0}, target) == doctest::Approx(80.0).epsilon(1e-9));

    CHECK(clockwise_angle_deg({0.3, 0.7}, {0.3, 0.7}) == 0.0);
    CHECK_THROWS_AS(clockwise_angle_deg({0, 0}, {1, 0}), DegenerateGeometry);
}

TEST_CASE("clockwise_angle_deg only depends on direction") {
    Rng rng(91);
    for (int trial = 0; trial < 200; ++trial) {
        Vec2 front{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        Vec2 target{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        if (front.norm() < 0.1 || target.norm() < 0.1) continue;
        double scale = rng.uniform(0.1, 50.0);
        double a = clockwise_angle_deg(front, target);
        double b = clockwise_angle_deg(front, target * scale);
        CHECK(a == doctest::Approx(b).epsilon(1e-9));
        CHECK(a >= 0.0);
        CHECK(a < 360.0);
        CHECK(ref::clockwise_deg_ref(front, target) == doctest::Approx(a).epsilon(1e-9));
    }
}

TEST_CASE("ray_hits_aabb examples") {
    Aabb cube = Aabb::from_center_size({2, 0, 0}, {1, 1, 1});
    CHECK(ray_hits_aabb({0, 0, 0}, {1, 0, 0}, cube, 5.0));
    CHECK_FALSE(ray_hits_aabb({0, 0, 0}, {1, 0, 0}, cube, 1.0));
    CHECK_FALSE(ray_hits_aabb({0, 0, 0}, {-1, 0, 0}, cube, 5.0));
}

TEST_CASE("ray_hits_aabb agrees with 1mm segment sampling") {
    Rng rng(303);
    int checked = 0;
    for (int trial = 0; trial < 400; ++trial) {
        Aabb box = Aabb::from_center_size(
            {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)},
            {rng.uniform(0.3, 2), rng.uniform(0.3, 2), rng.uniform(0.3, 2)});
        Vec3 origin{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        Vec3 dir{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        if (dir.norm() < 0.1 || box.contains(origin)) continue;
        double max_dist = rng.uniform(0.5, 12.0);

        Vec3 unit = dir * (1.0 / dir.norm());
        bool sampled_hit = false;
        double chord = 0.0;
        for (double t = 0.0; t <= max_dist; t += 0.001) {
            if (box.contains(origin + unit * t)) {
                sampled_hit = true;
                chord += 0.001;
            }
        }
        bool slab_hit = ray_hits_aabb(origin, dir, box, max_dist);
        if (sampled_hit) CHECK(slab_hit);
        if (!slab_hit) CHECK_FALSE(sampled_hit);
        if (slab_hit && chord > 0.005) CHECK(sampled_hit);
        ++checked;
    }
    CHECK(checked > 200);
}
