#include "dpv/rules.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace dpv {

std::string RuleId::str() const {
    return std::to_string(i1) + "," + std::to_string(i2) + "," + std::to_string(i3);
}

RuleId RuleId::parse(const std::string& s) {
    RuleId id;
    if (sscanf(s.c_str(), "%d,%d,%d", &id.i1, &id.i2, &id.i3) != 3 || !id.valid())
        throw std::invalid_argument("bad rule id '" + s + "' (want i1,i2,i3)");
    return id;
}

std::vector<RuleId> all_rules() {
    std::vector<RuleId> v;
    v.reserve(RuleId::count);
    for (int i = 0; i < RuleId::count; ++i) v.push_back(RuleId::from_index(i));
    return v;
}

namespace {

const ZTau kOne = ZTau::one();
const ZTau kTauZ = ZTau::tau();

ZTauVec2 vec(const ZTau& x, const ZTau& y) { return {x, y}; }

std::vector<ChildPlacement> sorted(std::vector<ChildPlacement> v) {
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

ZTauVec2 D4Element::apply(const ZTauVec2& v) const {
    auto term = [](int m, const ZTau& c) {
        if (m == 0) return ZTau::zero();
        return m > 0 ? c : -c;
    };
    return {term(m00, v.x) + term(m01, v.y), term(m10, v.x) + term(m11, v.y)};
}

const std::array<D4Element, 8>& d4_elements() {
    static const std::array<D4Element, 8> els = {{
        {1, 0, 0, 1, "id"},
        {0, -1, 1, 0, "r90"},
        {-1, 0, 0, -1, "r180"},
        {0, 1, -1, 0, "r270"},
        {-1, 0, 0, 1, "mx"},
        {1, 0, 0, -1, "my"},
        {0, 1, 1, 0, "diag"},
        {0, -1, -1, 0, "anti"},
    }};
    return els;
}

D4Element d4_compose(const D4Element& g, const D4Element& h) {
    D4Element r{g.m00 * h.m00 + g.m01 * h.m10, g.m00 * h.m01 + g.m01 * h.m11,
                g.m10 * h.m00 + g.m11 * h.m10, g.m10 * h.m01 + g.m11 * h.m11, "?"};
    for (const D4Element& e : d4_elements())
        if (e == r) return e;
    throw std::logic_error("d4_compose: product left the group");
}

std::vector<ChildPlacement> transform_children(const std::vector<ChildPlacement>& children,
                                               int parent, const D4Element& g) {
    // Transform the inflated parent box and every child box, then re-anchor
    // offsets to the lower-left corners of the images.
    Box super = Box::at({ZTau::zero(), ZTau::zero()}, kTauZ * tile_width(parent),
                        kTauZ * tile_height(parent));
    auto map_box = [&](const Box& b) {
        ZTauVec2 c0 = g.apply(b.lo()), c1 = g.apply(b.hi());
        return Box{std::min(c0.x, c1.x), std::min(c0.y, c1.y),
                   std::max(c0.x, c1.x), std::max(c0.y, c1.y)};
    };
    Box simg = map_box(super);
    std::vector<ChildPlacement> out;
    out.reserve(children.size());
    for (const ChildPlacement& ch : children) {
        Box img = map_box(tile_box(ch.type, ch.offset));
        int t = g.swaps_axes() ? ((ch.type & 1) << 1) | ((ch.type >> 1) & 1) : ch.type;
        out.push_back({t, img.lo() - simg.lo()});
    }
    return sorted(std::move(out));
}

Decomposition build_rule(const RuleId& id) {
    if (!id.valid()) throw std::invalid_argument("invalid rule id " + id.str());
    Decomposition dec;
    dec.parent[0] = {{3, vec(ZTau::zero(), ZTau::zero())}};
    if (id.i1 == 0)
        dec.parent[1] = sorted({{3, vec(ZTau::zero(), ZTau::zero())}, {2, vec(kTauZ, ZTau::zero())}});
    else
        dec.parent[1] = sorted({{2, vec(ZTau::zero(), ZTau::zero())}, {3, vec(kOne, ZTau::zero())}});
    if (id.i2 == 0)
        dec.parent[2] = sorted({{3, vec(ZTau::zero(), ZTau::zero())}, {1, vec(ZTau::zero(), kTauZ)}});
    else
        dec.parent[2] = sorted({{1, vec(ZTau::zero(), ZTau::zero())}, {3, vec(ZTau::zero(), kOne)}});

    // T3 parent: corner c holds the T3 child, v arranges {T0,T1,T2} in the
    // remaining L-shape. The c = 0 tables are explicit; other corners are the
    // mirror-x, mirror-y and rotation-by-pi images of the c = 0 variants.
    int c = id.i3 / 3, v = id.i3 % 3;
    const ZTau& t = kTauZ;
    const ZTau z = ZTau::zero(), o = kOne;
    std::vector<ChildPlacement> base;
    switch (v) {
        case 0: base = {{3, vec(z, z)}, {2, vec(t, z)}, {1, vec(z, t)}, {0, vec(t, t)}}; break;
        case 1: base = {{3, vec(z, z)}, {0, vec(t, z)}, {2, vec(t, o)}, {1, vec(z, t)}}; break;
        case 2: base = {{3, vec(z, z)}, {2, vec(t, z)}, {0, vec(z, t)}, {1, vec(o, t)}}; break;
    }
    static const char* corner_sym[4] = {"id", "mx", "my", "r180"};
    const D4Element* g = nullptr;
    for (const D4Element& e : d4_elements())
        if (std::string(e.name) == corner_sym[c]) g = &e;
    dec.parent[3] = transform_children(base, 3, *g);
    return dec;
}

SubstMatrix substitution_matrix(const RuleId& id) {
    Decomposition dec = build_rule(id);
    SubstMatrix m{};
    for (int p = 0; p < 4; ++p)
        for (const ChildPlacement& ch : dec.parent[p]) m[ch.type][p]++;
    return m;
}

StoneReport verify_stone(const Decomposition& dec) {
    for (int p = 0; p < 4; ++p) {
        Box target = Box::at({ZTau::zero(), ZTau::zero()}, kTauZ * tile_width(p),
                             kTauZ * tile_height(p));
        std::vector<Box> pieces;
        for (const ChildPlacement& ch : dec.parent[p]) pieces.push_back(tile_box(ch.type, ch.offset));
        PartitionReport rep = verify_box_partition(target, pieces);
        if (!rep.ok) return {false, "parent " + std::to_string(p) + ": " + rep.detail};
    }
    return {};
}

StoneReport verify_stone(const RuleId& id) { return verify_stone(build_rule(id)); }

std::array<size_t, 4> Patch::type_counts() const {
    std::array<size_t, 4> c{};
    for (const PlacedTile& t : tiles) c[t.type]++;
    return c;
}

void Patch::sort_canonical() { std::sort(tiles.begin(), tiles.end()); }

bool Patch::interior_disjoint(std::string* offender) const {
    for (size_t i = 0; i < tiles.size(); ++i) {
        Box bi = tile_box(tiles[i].type, tiles[i].pos);
        for (size_t j = i + 1; j < tiles.size(); ++j) {
            if (bi.interior_overlaps(tile_box(tiles[j].type, tiles[j].pos))) {
                if (offender)
                    *offender = "tiles " + std::to_string(i) + " and " + std::to_string(j);
                return false;
            }
        }
    }
    return true;
}

Patch inflate_patch(const Patch& p, const Decomposition& dec) {
    Patch out;
    out.tiles.reserve(p.tiles.size() * 4);
    for (const PlacedTile& t : p.tiles) {
        ZTauVec2 base = kTauZ * t.pos;
        for (const ChildPlacement& ch : dec.parent[t.type])
            out.tiles.push_back({ch.type, base + ch.offset});
    }
    out.sort_canonical();
    return out;
}

Patch inflate_patch(const Patch& p, const RuleId& id) { return inflate_patch(p, build_rule(id)); }

Supertile supertile_patch(const RuleId& id, int n) {
    if (n < 0) throw std::invalid_argument("supertile_patch: n must be >= 0");
    Decomposition dec = build_rule(id);
    Patch p;
    p.tiles = {{3, {ZTau::zero(), ZTau::zero()}}};
    for (int k = 0; k < n; ++k) p = inflate_patch(p, dec);
    ZTau side = tau_pow(n + 1);
    return {std::move(p), Box{ZTau::zero(), ZTau::zero(), side, side}};
}

namespace {

const std::map<Decomposition, RuleId>& rule_catalog() {
    static const std::map<Decomposition, RuleId>* cat = [] {
        auto* m = new std::map<Decomposition, RuleId>;
        for (const RuleId& id : all_rules()) m->emplace(build_rule(id), id);
        return m;
    }();
    return *cat;
}

} // namespace

RuleId d4_transform(const RuleId& id, const D4Element& g) {
    Decomposition dec = build_rule(id);
    Decomposition img;
    for (int p = 0; p < 4; ++p) {
        int tp = g.swaps_axes() ? ((p & 1) << 1) | ((p >> 1) & 1) : p;
        img.parent[tp] = transform_children(dec.parent[p], p, g);
    }
    auto it = rule_catalog().find(img);
    if (it == rule_catalog().end())
        throw std::logic_error("d4_transform: image of " + id.str() + " under " + g.name +
                               " is not in the catalog");
    return it->second;
}

std::vector<std::vector<RuleId>> d4_orbits() {
    std::vector<std::vector<RuleId>> orbits;
    std::array<bool, RuleId::count> seen{};
    for (int i = 0; i < RuleId::count; ++i) {
        if (seen[i]) continue;
        std::vector<RuleId> orbit;
        std::vector<int> stack = {i};
        seen[i] = true;
        while (!stack.empty()) {
            int cur = stack.back();
            stack.pop_back();
            orbit.push_back(RuleId::from_index(cur));
            for (const D4Element& g : d4_elements()) {
                int img = d4_transform(RuleId::from_index(cur), g).index();
                if (!seen[img]) {
                    seen[img] = true;
                    stack.push_back(img);
                }
            }
        }
        std::sort(orbit.begin(), orbit.end());
        orbits.push_back(std::move(orbit));
    }
    return orbits;
}

} // namespace dpv
