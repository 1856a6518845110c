#pragma once

// Static SVG artifacts for 2D coordinate clouds.  Output is deterministic
// (fixed decimal formatting, no timestamps); acceptance logic never reads
// these, they exist for eyeballing runs.

#include <span>
#include <string>

#include "picheck/mmspace.hpp"
#include "picheck/netflow.hpp"

namespace picheck::plots {

// Grayscale per-vertex heatmap; non-finite values render as the darkest bin.
std::string heatmap_svg(const PointCloudSpace& space,
                        std::span<const double> values, const std::string& title);

// Same palette quantized to ten bands; readable as contour steps.
std::string contour_svg(const PointCloudSpace& space,
                        std::span<const double> values, const std::string& title);

// Net points and arcs with the cut's source side and crossing arcs marked.
std::string cut_svg(const PointCloudSpace& space, const NetGraph& net,
                    std::span<const NetArc> arcs, const Cut& cut);

void write_text_file(const std::string& content, const std::string& path);

}  // namespace picheck::plots
