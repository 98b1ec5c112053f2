#include "dpv/box.hpp"

namespace dpv {

PartitionReport verify_box_partition(const Box& target, const std::vector<Box>& pieces) {
    PartitionReport rep;
    ZTau total = ZTau::zero();
    for (size_t i = 0; i < pieces.size(); ++i) {
        const Box& p = pieces[i];
        if (!p.nonempty_interior()) {
            return {false, "piece " + std::to_string(i) + " is degenerate"};
        }
        if (!target.contains(p)) {
            return {false, "piece " + std::to_string(i) + " escapes the target box"};
        }
        for (size_t j = i + 1; j < pieces.size(); ++j) {
            if (p.interior_overlaps(pieces[j])) {
                return {false, "pieces " + std::to_string(i) + " and " + std::to_string(j) + " overlap"};
            }
        }
        total += p.area();
    }
    if (!(total == target.area())) {
        return {false, "total piece area " + total.str() + " != target area " + target.area().str()};
    }
    return rep;
}

} // namespace dpv
