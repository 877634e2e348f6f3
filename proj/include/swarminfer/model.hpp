#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace swarminfer {

using Bytes = std::int64_t;
using MultCount = std::int64_t;

inline constexpr Bytes kDefaultInputBytes = 150528;  // 224x224x3, one byte per pixel channel

// Geometry of a single conv/dense layer; input to the cost formulas.
// A dense layer is expressed with 1x1 kernel and 1x1 output map, with
// in/out channels holding the neuron counts.
struct LayerDims {
  int kernel_h = 1;
  int kernel_w = 1;
  int in_channels = 1;
  int out_channels = 1;
  int out_h = 1;
  int out_w = 1;
  int dtype_bytes = 4;

  friend bool operator==(const LayerDims&, const LayerDims&) = default;
};

// Weight storage: kernel_h * kernel_w * in_channels * out_channels * dtype_bytes.
Bytes layer_memory_bytes(const LayerDims& dims);

// Scalar multiplications over the output map:
// out_h * out_w * kernel_h * kernel_w * in_channels * out_channels.
MultCount layer_multiplications(const LayerDims& dims);

// Activation volume shipped to the next consumer:
// out_h * out_w * out_channels * dtype_bytes.
Bytes layer_output_bytes(const LayerDims& dims);

// Cost profile of one layer; `index` is the 1-based position in the model.
struct LayerProfile {
  int index = 0;
  Bytes memory_bytes = 0;
  MultCount multiplications = 1;
  Bytes output_bytes = 1;

  friend bool operator==(const LayerProfile&, const LayerProfile&) = default;
};

// Shortcut dependency: layer (target - stride) feeds layer `target` in
// parallel with the pipeline path. payload_bytes must equal the source
// layer's output_bytes.
struct ResidualEdge {
  int target = 0;
  int stride = 0;
  Bytes payload_bytes = 0;

  int source() const { return target - stride; }

  friend bool operator==(const ResidualEdge&, const ResidualEdge&) = default;
};

struct CnnModel {
  std::string name;
  Bytes input_bytes = kDefaultInputBytes;  // source image size K_s
  std::vector<LayerProfile> layers;
  std::vector<ResidualEdge> residual_edges;

  int depth() const { return static_cast<int>(layers.size()); }

  // 1-based layer access.
  const LayerProfile& layer(int j) const { return layers[static_cast<size_t>(j) - 1]; }

  // The residual edge terminating at `target`, or nullptr. Valid models have
  // at most one per target.
  const ResidualEdge* residual_into(int target) const;

  friend bool operator==(const CnnModel&, const CnnModel&) = default;
};

enum class ModelTemplate { Sequential, Residual };

const char* to_string(ModelTemplate t);
ModelTemplate model_template_from_string(const std::string& s);

// Layer geometry schedule used by the templates. Channel growth and spatial
// shrink are step functions of the layer index; 0 disables a step.
struct WidthProfile {
  int input_channels = 3;
  int base_channels = 32;
  int channel_double_every = 0;  // double out_channels every k layers
  int max_channel_factor = 8;    // cap growth at base_channels * factor
  int spatial = 28;              // output map side of layer 1
  int spatial_halve_every = 0;   // halve the map side every k layers
  int min_spatial = 4;
  int kernel = 3;
  int dtype_bytes = 4;

  friend bool operator==(const WidthProfile&, const WidthProfile&) = default;
};

// Geometry of layer `j` (1-based) under a width profile.
LayerDims template_layer_dims(const WidthProfile& width, int j);

// Sequential: a plain pipeline. Residual: the same pipeline plus stride-2
// shortcuts targeting layers 3, 5, 7, ... (one per block of two layers).
// Residual requires depth >= 3; both require depth >= 1.
CnnModel build_model_from_template(ModelTemplate tmpl, int depth,
                                   const WidthProfile& width = {},
                                   Bytes input_bytes = kDefaultInputBytes,
                                   std::string name = "");

struct ModelViolation {
  std::string message;
  int layer = -1;  // offending layer or edge target, when applicable
};

// Reports every invariant breach (bad stride, duplicate target, payload
// mismatch, nonpositive layer costs). Violations are data, not faults.
std::vector<ModelViolation> validate_model(const CnnModel& model);

}  // namespace swarminfer
