#include "scanforge_ref/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>

#include "scanforge/jsonio.hpp"
#include "scanforge/pipeline.hpp"
#include "scanforge/random.hpp"

namespace scanforge::ref {

Mat4 Mat4::identity() {
    Mat4 r;
    for (int i = 0; i < 4; ++i) r.m[i][i] = 1.0;
    return r;
}

Mat4 Mat4::from_transform(const RigidTransform& t) {
    Mat4 r = identity();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.m[i][j] = t.rotation.at(i, j);
    r.m[0][3] = t.translation.x;
    r.m[1][3] = t.translation.y;
    r.m[2][3] = t.translation.z;
    return r;
}

Mat4 Mat4::operator*(const Mat4& o) const {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += m[i][k] * o.m[k][j];
            r.m[i][j] = s;
        }
    return r;
}

Vec3 Mat4::apply_point(const Vec3& p) const {
    double v[4] = {p.x, p.y, p.z, 1.0};
    double out[4] = {0, 0, 0, 0};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) out[i] += m[i][k] * v[k];
    return {out[0] / out[3], out[1] / out[3], out[2] / out[3]};
}

Mat4 Mat4::inverted() const {
    double a[4][8];
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            a[i][j] = m[i][j];
            a[i][j + 4] = i == j ? 1.0 : 0.0;
        }
    }
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        for (int j = 0; j < 8; ++j) std::swap(a[col][j], a[pivot][j]);
        double d = a[col][col];
        for (int j = 0; j < 8; ++j) a[col][j] /= d;
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            double f = a[r][col];
            for (int j = 0; j < 8; ++j) a[r][j] -= f * a[col][j];
        }
    }
    Mat4 out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out.m[i][j] = a[i][j + 4];
    return out;
}

double max_abs_diff(const Mat4& m, const RigidTransform& t) {
    Mat4 other = Mat4::from_transform(t);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            worst = std::max(worst, std::fabs(m.m[i][j] - other.m[i][j]));
    return worst;
}

std::optional<double> dijkstra_length_ref(const OccupancyGrid& grid,
                                          std::pair<int, int> start,
                                          std::pair<int, int> goal) {
    const int w = grid.width;
    const int h = grid.height;
    const size_t total = size_t(w) * h;
    const double straight = grid.cell_size;
    const double diagonal = grid.cell_size * std::sqrt(2.0);

    std::vector<int> s_cnt(total, 0), d_cnt(total, 0);
    std::vector<double> dist(total, std::numeric_limits<double>::infinity());
    std::vector<uint8_t> done(total, 0);
    auto idx = [w](int i, int j) { return size_t(j) * w + i; };
    dist[idx(start.first, start.second)] = 0.0;

    for (size_t iter = 0; iter < total; ++iter) {
        int bi = -1, bj = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < h; ++j) {
            for (int i = 0; i < w; ++i) {
                size_t u = idx(i, j);
                if (done[u] || dist[u] >= best) continue;
                best = dist[u];
                bi = i;
                bj = j;
            }
        }
        if (bi < 0) break;
        size_t u = idx(bi, bj);
        done[u] = 1;
        if (bi == goal.first && bj == goal.second)
            return s_cnt[u] * straight + d_cnt[u] * diagonal;

        for (int dj = -1; dj <= 1; ++dj) {
            for (int di = -1; di <= 1; ++di) {
                if (di == 0 && dj == 0) continue;
                int ni = bi + di;
                int nj = bj + dj;
                if (!grid.in_bounds(ni, nj) || grid.is_blocked(ni, nj)) continue;
                int ns = s_cnt[u] + (di == 0 || dj == 0 ? 1 : 0);
                int nd = d_cnt[u] + (di != 0 && dj != 0 ? 1 : 0);
                double cand = ns * straight + nd * diagonal;
                size_t v = idx(ni, nj);
                if (cand < dist[v]) {
                    dist[v] = cand;
                    s_cnt[v] = ns;
                    d_cnt[v] = nd;
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<std::pair<int, int>> nearest_free_cell_ref(const OccupancyGrid& grid,
                                                         const Vec2& p) {
    std::optional<std::pair<int, int>> best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int j = 0; j < grid.height; ++j) {
        for (int i = 0; i < grid.width; ++i) {
            if (grid.is_blocked(i, j)) continue;
            double d = (grid.cell_center(i, j) - p).norm();
            if (d < best_dist - 1e-12) {
                best_dist = d;
                best = std::make_pair(i, j);
            }
        }
    }
    return best;
}

double clockwise_deg_ref(const Vec2& front, const Vec2& to_target) {
    double a_front = rad_to_deg(std::atan2(front.y, front.x));
    double a_target = rad_to_deg(std::atan2(to_target.y, to_target.x));
    return wrap_deg(a_front - a_target);
}

std::string sector_name_ref(double theta_deg) {
    double t = wrap_deg(theta_deg);
    if (t >= 315.0 || t < 45.0) return "front";
    if (t >= 45.0 && t < 135.0) return "right";
    if (t >= 135.0 && t < 225.0) return "back";
    return "left";
}

namespace {

double round_tenth_ref(double v) { return std::floor(v * 10.0 + 0.5) / 10.0; }

const ObjectInstance* find_object(const Room& room, const std::string& id) {
    for (const ObjectInstance& obj : room.objects)
        if (obj.object_id == id) return &obj;
    return nullptr;
}

double euclid_ref(const Vec3& a, const Vec3& b) {
    double sum = 0.0;
    const double da[3] = {a.x - b.x, a.y - b.y, a.z - b.z};
    for (double d : da) sum += d * d;
    return std::sqrt(sum);
}

struct Interval {
    double lo;
    double hi;
};

std::array<Interval, 3> world_box_ref(const ObjectInstance& obj) {
    double c = std::cos(deg_to_rad(obj.yaw_deg));
    double s = std::sin(deg_to_rad(obj.yaw_deg));
    double hx = obj.size.x * 0.5;
    double hy = obj.size.y * 0.5;
    std::array<Interval, 3> box = {
        Interval{std::numeric_limits<double>::infinity(),
                 -std::numeric_limits<double>::infinity()},
        Interval{std::numeric_limits<double>::infinity(),
                 -std::numeric_limits<double>::infinity()},
        Interval{obj.position.z - obj.size.z * 0.5, obj.position.z + obj.size.z * 0.5}};
    const double sx[4] = {-hx, hx, hx, -hx};
    const double sy[4] = {-hy, -hy, hy, hy};
    for (int k = 0; k < 4; ++k) {
        double wx = obj.position.x + sx[k] * c - sy[k] * s;
        double wy = obj.position.y + sx[k] * s + sy[k] * c;
        box[0].lo = std::min(box[0].lo, wx);
        box[0].hi = std::max(box[0].hi, wx);
        box[1].lo = std::min(box[1].lo, wy);
        box[1].hi = std::max(box[1].hi, wy);
    }
    return box;
}

double box_gap_ref(const ObjectInstance& a, const ObjectInstance& b) {
    auto ba = world_box_ref(a);
    auto bb = world_box_ref(b);
    double sum = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
        double sep = 0.0;
        if (ba[axis].lo > bb[axis].hi) sep = ba[axis].lo - bb[axis].hi;
        if (bb[axis].lo > ba[axis].hi) sep = bb[axis].lo - ba[axis].hi;
        sum += sep * sep;
    }
    return std::sqrt(sum);
}

double trapezoid_area_ref(const Polygon2& polygon) {
    const auto& v = polygon.vertices();
    double sum = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        const Vec2& p = v[i];
        const Vec2& q = v[(i + 1) % v.size()];
        sum += (p.x - q.x) * (p.y + q.y);
    }
    return std::fabs(sum) * 0.5;
}

bool fits_ref(const ObjectInstance& movable, const ObjectInstance& support,
              bool need_height) {
    bool any = false;
    const double orients[2][2] = {{movable.size.x, movable.size.y},
                                  {movable.size.y, movable.size.x}};
    for (auto& o : orients)
        if (o[0] < support.size.x && o[1] < support.size.y) any = true;
    if (need_height) any = any && movable.size.z < support.size.z;
    return any;
}

}  // namespace

std::optional<std::string> expected_answer_ref(const Room& room, const QaItem& item,
                                               double contact_epsilon) {
    const std::string& oracle = item.provenance.oracle;
    const auto& ops = item.provenance.operands;

    if (oracle == "instance_count") {
        int count = 0;
        for (const ObjectInstance& obj : room.objects)
            if (obj.category == ops.at(0)) ++count;
        return fmt_f1(double(count));
    }
    if (oracle.rfind("object_size:", 0) == 0) {
        const ObjectInstance* obj = find_object(room, ops.at(0));
        if (!obj) return std::nullopt;
        std::array<double, 3> sides = {obj->size.x, obj->size.y, obj->size.z};
        std::sort(sides.begin(), sides.end());
        std::string variant = oracle.substr(std::strlen("object_size:"));
        double value = 0.0;
        if (variant == "longest_side") value = sides[2];
        else if (variant == "shortest_side") value = sides[0];
        else if (variant == "height") value = obj->size.z;
        else if (variant == "footprint_area") value = obj->size.x * obj->size.y;
        else return std::nullopt;
        return fmt_f1(round_tenth_ref(value));
    }
    if (oracle == "polygon_area")
        return fmt_f1(round_tenth_ref(trapezoid_area_ref(room.floor_polygon)));
    if (oracle == "room_label") return room.room_type;
    if (oracle == "centroid_distance") {
        const ObjectInstance* a = find_object(room, ops.at(0));
        const ObjectInstance* b = find_object(room, ops.at(1));
        if (!a || !b) return std::nullopt;
        return fmt_f1(round_tenth_ref(euclid_ref(a->position, b->position)));
    }
    if (oracle == "nearest_object") {
        const ObjectInstance* ref_obj = find_object(room, ops.at(0));
        if (!ref_obj) return std::nullopt;
        const ObjectInstance* best = nullptr;
        double best_dist = 0.0;
        for (size_t k = 1; k < ops.size(); ++k) {
            const ObjectInstance* cand = find_object(room, ops[k]);
            if (!cand) return std::nullopt;
            double d = euclid_ref(ref_obj->position, cand->position);
            if (!best || d < best_dist ||
                (d == best_dist && cand->object_id < best->object_id)) {
                best = cand;
                best_dist = d;
            }
        }
        return best->category;
    }
    if (oracle == "direction_of") {
        const ObjectInstance* stand = find_object(room, ops.at(0));
        const ObjectInstance* face = find_object(room, ops.at(1));
        const ObjectInstance* query = find_object(room, ops.at(2));
        if (!stand || !face || !query) return std::nullopt;
        double theta = clockwise_deg_ref((face->position - stand->position).xy(),
                                         (query->position - stand->position).xy());
        return sector_name_ref(theta);
    }
    if (oracle == "aabb_contact:gap" || oracle == "aabb_contact:touching") {
        const ObjectInstance* a = find_object(room, ops.at(0));
        const ObjectInstance* b = find_object(room, ops.at(1));
        if (!a || !b) return std::nullopt;
        bool contact = box_gap_ref(*a, *b) <= contact_epsilon;
        if (oracle == "aabb_contact:gap") return contact ? "no" : "yes";
        return contact ? "yes" : "no";
    }
    if (oracle == "placement_feasible:on_top" ||
        oracle == "placement_feasible:inside") {
        const ObjectInstance* movable = find_object(room, ops.at(0));
        const ObjectInstance* support = find_object(room, ops.at(1));
        if (!movable || !support) return std::nullopt;
        bool need_height = oracle == "placement_feasible:inside";
        return fits_ref(*movable, *support, need_height) ? "yes" : "no";
    }
    return std::nullopt;
}

Vec3 parse_description_offsets(const std::string& text) {
    Vec3 offsets{};  // x = leftward, y = forward, z = upward
    if (text == "at the reference point") return offsets;

    std::string body = text;
    const std::string kPrefix = "locate ";
    if (body.rfind(kPrefix, 0) == 0) body = body.substr(kPrefix.size());
    for (const char* suffix : {" of the reference point", " the reference point"}) {
        size_t n = std::strlen(suffix);
        if (body.size() >= n && body.compare(body.size() - n, n, suffix) == 0) {
            body = body.substr(0, body.size() - n);
            break;
        }
    }

    size_t pos = 0;
    while (pos < body.size()) {
        size_t next = body.find(" and ", pos);
        std::string part = body.substr(pos, next == std::string::npos ? std::string::npos
                                                                      : next - pos);
        pos = next == std::string::npos ? body.size() : next + 5;

        size_t meters = part.find(" meters ");
        if (meters == std::string::npos) continue;
        double value = std::stod(part.substr(0, meters));
        std::string dir = part.substr(meters + 8);
        if (dir == "to the left") offsets.x += value;
        else if (dir == "to the right") offsets.x -= value;
        else if (dir == "in front") offsets.y += value;
        else if (dir == "behind") offsets.y -= value;
        else if (dir == "above") offsets.z += value;
        else if (dir == "below") offsets.z -= value;
    }
    return offsets;
}

// ---------------------------------------------------------------------------
// SHA-256

namespace {

struct Sha256 {
    uint32_t state[8];
    uint64_t bit_len = 0;
    unsigned char buffer[64];
    size_t buffer_len = 0;

    Sha256() {
        static const uint32_t init[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372,
                                         0xa54ff53a, 0x510e527f, 0x9b05688c,
                                         0x1f83d9ab, 0x5be0cd19};
        std::memcpy(state, init, sizeof state);
    }

    static uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void process(const unsigned char* chunk) {
        static const uint32_t k[64] = {
            0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
            0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
            0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
            0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
            0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
            0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
            0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
            0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
            0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
            0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
            0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};
        uint32_t w[64];
        for (int i = 0; i < 16; ++i) {
            w[i] = (uint32_t(chunk[i * 4]) << 24) | (uint32_t(chunk[i * 4 + 1]) << 16) |
                   (uint32_t(chunk[i * 4 + 2]) << 8) | uint32_t(chunk[i * 4 + 3]);
        }
        for (int i = 16; i < 64; ++i) {
            uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        uint32_t a = state[0], b = state[1], c = state[2], d = state[3];
        uint32_t e = state[4], f = state[5], g = state[6], h = state[7];
        for (int i = 0; i < 64; ++i) {
            uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            uint32_t ch = (e & f) ^ (~e & g);
            uint32_t temp1 = h + s1 + ch + k[i] + w[i];
            uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            uint32_t temp2 = s0 + maj;
            h = g;
            g = f;
            f = e;
            e = d + temp1;
            d = c;
            c = b;
            b = a;
            a = temp1 + temp2;
        }
        state[0] += a;
        state[1] += b;
        state[2] += c;
        state[3] += d;
        state[4] += e;
        state[5] += f;
        state[6] += g;
        state[7] += h;
    }

    void update(const unsigned char* data, size_t len) {
        bit_len += uint64_t(len) * 8;
        while (len > 0) {
            size_t take = std::min(len, size_t(64) - buffer_len);
            std::memcpy(buffer + buffer_len, data, take);
            buffer_len += take;
            data += take;
            len -= take;
            if (buffer_len == 64) {
                process(buffer);
                buffer_len = 0;
            }
        }
    }

    std::string finish() {
        unsigned char pad[72] = {0x80};
        size_t pad_len = (buffer_len < 56) ? 56 - buffer_len : 120 - buffer_len;
        uint64_t bits = bit_len;
        unsigned char len_bytes[8];
        for (int i = 7; i >= 0; --i) {
            len_bytes[i] = (unsigned char)(bits & 0xff);
            bits >>= 8;
        }
        update(pad, pad_len);
        update(len_bytes, 8);
        char out[65];
        for (int i = 0; i < 8; ++i)
            std::snprintf(out + i * 8, 9, "%08x", state[i]);
        return std::string(out, 64);
    }
};

}  // namespace

std::string sha256_hex(const std::string& data) {
    Sha256 h;
    h.update(reinterpret_cast<const unsigned char*>(data.data()), data.size());
    return h.finish();
}

std::string hash_tree(const std::filesystem::path& root) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::vector<std::pair<std::string, std::filesystem::path>> keyed;
    for (const auto& p : files)
        keyed.push_back({p.lexically_relative(root).generic_string(), p});
    std::sort(keyed.begin(), keyed.end());

    Sha256 h;
    for (const auto& [rel, path] : keyed) {
        h.update(reinterpret_cast<const unsigned char*>(rel.data()), rel.size());
        unsigned char zero = 0;
        h.update(&zero, 1);
        std::string content = read_file(path);
        h.update(reinterpret_cast<const unsigned char*>(content.data()),
                 content.size());
        h.update(&zero, 1);
    }
    return h.finish();
}

Room make_random_room(uint64_t seed, int max_objects) {
    Rng rng(seed);
    double w = rng.uniform(4.0, 10.0);
    double h = rng.uniform(4.0, 10.0);

    std::vector<Vec2> verts;
    if (rng.next_double() < 0.3) {
        verts = {{0, 0}, {w, 0}, {w, h / 2}, {w / 2, h / 2}, {w / 2, h}, {0, h}};
    } else {
        verts = {{0, 0}, {w, 0}, {w, h}, {0, h}};
    }
    Polygon2 polygon(std::move(verts));

    static const std::vector<std::string> kCategories = {
        "chair",   "table",      "bed",     "sofa",   "wardrobe", "desk",
        "lamp",    "bookshelf",  "rug",     "tv stand", "nightstand", "dresser",
        "plant",   "mirror",     "cabinet", "stool",  "bench",    "shelf"};
    static const std::vector<std::string> kRoomTypes = {
        "bedroom", "kitchen", "bathroom", "living room", "dining room",
        "storage room"};

    Room room{"room_" + std::to_string(seed), rng.pick(kRoomTypes), polygon,
              rng.uniform(2.4, 3.2), {}};

    int count = rng.uniform_int(3, std::max(3, max_objects));
    for (int i = 0; i < count; ++i) {
        ObjectInstance obj;
        obj.category = rng.pick(kCategories);
        obj.object_id = obj.category + "_" + std::to_string(i);
        obj.size = {rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0),
                    rng.uniform(0.2, 2.0)};
        Vec2 p;
        for (int attempt = 0; attempt < 200; ++attempt) {
            p = {rng.uniform(0.3, w - 0.3), rng.uniform(0.3, h - 0.3)};
            if (polygon.contains(p)) break;
        }
        obj.position = {p.x, p.y, obj.size.z * 0.5};
        obj.yaw_deg = rng.uniform(0.0, 360.0);
        obj.navigable = rng.next_double() < 0.1;
        room.objects.push_back(std::move(obj));
    }
    return room;
}

}  // namespace scanforge::ref
