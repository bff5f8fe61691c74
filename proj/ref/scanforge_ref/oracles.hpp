#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scanforge/qa.hpp"
#include "scanforge/trajectory.hpp"

// Independent second implementations used as test oracles. Nothing here may
// call the production routine it checks.
namespace scanforge::ref {

// plain 4x4 homogeneous matrices
struct Mat4 {
    std::array<std::array<double, 4>, 4> m{};

    static Mat4 identity();
    static Mat4 from_transform(const RigidTransform& t);
    Mat4 operator*(const Mat4& o) const;
    Vec3 apply_point(const Vec3& p) const;
    Mat4 inverted() const;  // Gauss-Jordan
};

double max_abs_diff(const Mat4& m, const RigidTransform& t);

// O(V^2) Dijkstra over the same 8-connected free-cell graph; length derived
// from integer step counts so matching searches agree bit for bit.
std::optional<double> dijkstra_length_ref(const OccupancyGrid& grid,
                                          std::pair<int, int> start,
                                          std::pair<int, int> goal);

std::optional<std::pair<int, int>> nearest_free_cell_ref(const OccupancyGrid& grid,
                                                         const Vec2& p);

// clockwise angle via bearings, sector via if-chain
double clockwise_deg_ref(const Vec2& front, const Vec2& to_target);
std::string sector_name_ref(double theta_deg);

// Recomputes the expected answer string of a generated item from raw room
// geometry; empty optional when the oracle tag is unknown.
std::optional<std::string> expected_answer_ref(const Room& room, const QaItem& item,
                                               double contact_epsilon);

// Signed (leftward, forward, upward) offsets parsed back out of a rendered
// position description.
Vec3 parse_description_offsets(const std::string& text);

std::string sha256_hex(const std::string& data);
// digest over sorted (relative path, content) pairs
std::string hash_tree(const std::filesystem::path& root);

// seeded synthetic rooms for property and acceptance tests
Room make_random_room(uint64_t seed, int max_objects);

}  // namespace scanforge::ref
