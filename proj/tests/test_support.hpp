#pragma once

#include <string>

#include "scanforge/geometry.hpp"
#include "scanforge/pipeline.hpp"
#include "scanforge/random.hpp"

namespace scanforge::test {

inline std::string data_path(const std::string& name) {
    return std::string(SCANFORGE_TEST_DATA_DIR) + "/" + name;
}

inline std::string read_fixture(const std::string& name) {
    return read_file(data_path(name));
}

inline Rotation3 rot_x(double deg) {
    double c = std::cos(deg_to_rad(deg));
    double s = std::sin(deg_to_rad(deg));
    return Rotation3::from_matrix({{{1, 0, 0}, {0, c, -s}, {0, s, c}}});
}

inline Rotation3 rot_y(double deg) {
    double c = std::cos(deg_to_rad(deg));
    double s = std::sin(deg_to_rad(deg));
    return Rotation3::from_matrix({{{c, 0, s}, {0, 1, 0}, {-s, 0, c}}});
}

inline RigidTransform random_transform(Rng& rng) {
    Rotation3 r = Rotation3::yaw_deg(rng.uniform(0.0, 360.0)) *
                  rot_y(rng.uniform(-80.0, 80.0)) * rot_x(rng.uniform(0.0, 360.0));
    return {r, {rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)}};
}

inline bool vec_close(const Vec3& a, const Vec3& b, double tol) {
    return std::fabs(a.x - b.x) <= tol && std::fabs(a.y - b.y) <= tol &&
           std::fabs(a.z - b.z) <= tol;
}

inline double transform_diff(const RigidTransform& a, const RigidTransform& b) {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            worst = std::max(worst, std::fabs(a.rotation.at(i, j) - b.rotation.at(i, j)));
    worst = std::max(worst, std::fabs(a.translation.x - b.translation.x));
    worst = std::max(worst, std::fabs(a.translation.y - b.translation.y));
    worst = std::max(worst, std::fabs(a.translation.z - b.translation.z));
    return worst;
}

}  // namespace scanforge::test
