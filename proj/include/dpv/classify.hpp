#pragma once

#include "dpv/modelset.hpp"
#include "dpv/raster.hpp"
#include "dpv/window.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dpv {

enum class ShapeClass { Square, Parallelogram, Fractal };
const char* shape_name(ShapeClass s);

/// Least-squares fit of log2(boundary box count) against k.
struct DimensionFit {
    double estimate = 0;
    double stderr_ = 0;
    int points = 0;
};
DimensionFit boundary_dimension(const std::vector<LevelStats>& profile, int k_min, int k_max);

struct ClassEntry {
    RuleId rule;
    ShapeClass shape = ShapeClass::Fractal;
    std::optional<PolyWindows> poly; // set for Square / Parallelogram
    int orbit = -1;                  // orbit index (orbits sorted by least member)
    int mld_class = -1;              // polygonal rules only, -1 otherwise
    std::string slope_tag;           // parallelograms: signed angle tag
    char axis = 0;                   // 'x' or 'y' shear direction, 0 otherwise
    std::string fractal_type;        // castle / cross / island
    DimensionFit dim;
};

struct Classification {
    std::vector<ClassEntry> entries; // indexed by RuleId::index()
    std::vector<std::vector<RuleId>> orbits;
    std::map<std::string, std::vector<RuleId>> mld_classes; // key -> members

    const ClassEntry& entry(const RuleId& id) const { return entries[size_t(id.index())]; }
    std::array<int, 3> shape_counts() const; // square, parallelogram, fractal
};

struct ClassifyOptions {
    int raster_k = 8;          // resolution used for certification rasters
    int internal_extra = 2;
    int dim_k_min = 6, dim_k_max = 12; // box-counting fit range
    bool with_dimensions = true;
};

/// Full taxonomy sweep over the 48 rules. Raster pyramids are computed once
/// per rule; pass a cache to reuse them across calls.
struct RasterCache {
    std::map<int, WindowRaster> by_rule; // keyed by RuleId::index()
    const WindowRaster& get(const RuleId& id, const RasterOptions& opt);
};

Classification classify_all(const ClassifyOptions& opt, RasterCache* cache = nullptr);

/// Shear detection for a single certified-polygonal rule: the unique shear
/// candidate, with exact lattice compatibility checks.
struct ShearReport {
    PolyWindows windows;
    bool unique = true;
    bool lattice_ok = true;     // (S + S*) maps the embedding basis into the lattice
    bool alpha_conj_closed = true;
};
ShearReport detect_shear(const RuleId& id, const WindowIFS& ifs, const WindowRaster& raster);

/// Slope tag for a shear value: one of +-pi/4, +-atan_tau, +-atan_tau_inv.
std::string slope_tag(const ZTau& alpha);

} // namespace dpv
