// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace beoltherm {

struct Material {
  std::string name;
  double conductivity_w_per_m_k = 0.0;
  friend bool operator==(const Material&, const Material&) = default;
};

enum class LayerKind { Line, Via, DielectricOnly };

const char* to_string(LayerKind kind);

struct ProcessLayer {
  std::string name;
  LayerKind kind = LayerKind::DielectricOnly;
  double z_bottom_um = 0.0;
  double thickness_um = 0.0;
  int gds_layer = -1;    // meaningful for line/via layers only
  int gds_datatype = 0;
  std::optional<Material> metal; // present iff kind != DielectricOnly
  Material background;           // dielectric filling non-metal space
  friend bool operator==(const ProcessLayer&, const ProcessLayer&) = default;
};

/// Ordered bottom-up process stack mapping layout layers to z extents and
/// materials. Immutable after load; safe for concurrent reads.
struct LayerStack {
  std::vector<ProcessLayer> layers;
  double total_thickness_um = 0.0;

  /// The unique layer whose half-open interval [z_bottom, z_bottom + t)
  /// contains z. Throws when z is outside [0, total_thickness).
  const ProcessLayer& layer_at(double z_um) const;

  friend bool operator==(const LayerStack&, const LayerStack&) = default;
};

/// Parses and validates a stack document (JSON, see README for the schema:
/// a "materials" map and a bottom-up "layers" array). z_bottom values are
/// computed cumulatively when omitted.
LayerStack load_stack(const std::string& json_text);
LayerStack load_stack_file(const std::string& path);

/// Serializes a stack so load_stack reproduces it exactly.
std::string stack_to_json(const LayerStack& stack);

} // namespace beoltherm
