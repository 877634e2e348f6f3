#include "swarminfer/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace swarminfer {

namespace {

void require_valid(const LayerDims& dims) {
  const int fields[] = {dims.kernel_h, dims.kernel_w, dims.in_channels,
                        dims.out_channels, dims.out_h, dims.out_w, dims.dtype_bytes};
  for (int f : fields) {
    if (f < 1) throw std::invalid_argument("LayerDims fields must all be >= 1");
  }
}

}  // namespace

Bytes layer_memory_bytes(const LayerDims& dims) {
  require_valid(dims);
  return static_cast<Bytes>(dims.kernel_h) * dims.kernel_w * dims.in_channels *
         dims.out_channels * dims.dtype_bytes;
}

MultCount layer_multiplications(const LayerDims& dims) {
  require_valid(dims);
  return static_cast<MultCount>(dims.out_h) * dims.out_w * dims.kernel_h *
         dims.kernel_w * dims.in_channels * dims.out_channels;
}

Bytes layer_output_bytes(const LayerDims& dims) {
  require_valid(dims);
  return static_cast<Bytes>(dims.out_h) * dims.out_w * dims.out_channels * dims.dtype_bytes;
}

const ResidualEdge* CnnModel::residual_into(int target) const {
  for (const ResidualEdge& e : residual_edges) {
    if (e.target == target) return &e;
  }
  return nullptr;
}

const char* to_string(ModelTemplate t) {
  return t == ModelTemplate::Sequential ? "sequential" : "residual";
}

ModelTemplate model_template_from_string(const std::string& s) {
  if (s == "sequential") return ModelTemplate::Sequential;
  if (s == "residual") return ModelTemplate::Residual;
  throw std::invalid_argument("unknown model template '" + s + "' (expected sequential|residual)");
}

LayerDims template_layer_dims(const WidthProfile& width, int j) {
  if (j < 1) throw std::invalid_argument("layer index is 1-based");
  auto channels = [&](int layer) {
    int factor = 1;
    if (width.channel_double_every > 0) {
      int steps = (layer - 1) / width.channel_double_every;
      factor = std::min(1 << std::min(steps, 30), width.max_channel_factor);
    }
    return width.base_channels * factor;
  };
  auto spatial = [&](int layer) {
    int side = width.spatial;
    if (width.spatial_halve_every > 0) {
      int steps = (layer - 1) / width.spatial_halve_every;
      side = std::max(side >> std::min(steps, 30), width.min_spatial);
    }
    return side;
  };
  LayerDims dims;
  dims.kernel_h = width.kernel;
  dims.kernel_w = width.kernel;
  dims.in_channels = j == 1 ? width.input_channels : channels(j - 1);
  dims.out_channels = channels(j);
  dims.out_h = spatial(j);
  dims.out_w = spatial(j);
  dims.dtype_bytes = width.dtype_bytes;
  return dims;
}

CnnModel build_model_from_template(ModelTemplate tmpl, int depth, const WidthProfile& width,
                                   Bytes input_bytes, std::string name) {
  if (depth < 1) throw std::invalid_argument("model depth must be >= 1");
  if (tmpl == ModelTemplate::Residual && depth < 3) {
    throw std::invalid_argument("residual template needs depth >= 3 to admit a shortcut");
  }
  if (input_bytes < 0) throw std::invalid_argument("input_bytes must be >= 0");

  CnnModel model;
  model.name = name.empty() ? std::string(to_string(tmpl)) + "-" + std::to_string(depth) : std::move(name);
  model.input_bytes = input_bytes;
  model.layers.reserve(static_cast<size_t>(depth));
  for (int j = 1; j <= depth; ++j) {
    const LayerDims dims = template_layer_dims(width, j);
    model.layers.push_back(LayerProfile{
        .index = j,
        .memory_bytes = layer_memory_bytes(dims),
        .multiplications = layer_multiplications(dims),
        .output_bytes = layer_output_bytes(dims),
    });
  }
  if (tmpl == ModelTemplate::Residual) {
    // One stride-2 shortcut per block of two layers: 1->3, 3->5, ...
    for (int target = 3; target <= depth; target += 2) {
      model.residual_edges.push_back(ResidualEdge{
          .target = target,
          .stride = 2,
          .payload_bytes = model.layer(target - 2).output_bytes,
      });
    }
  }
  return model;
}

std::vector<ModelViolation> validate_model(const CnnModel& model) {
  std::vector<ModelViolation> out;
  if (model.input_bytes < 0) {
    out.push_back({"input_bytes is negative", -1});
  }
  for (const LayerProfile& layer : model.layers) {
    if (layer.memory_bytes < 0)
      out.push_back({"layer memory_bytes is negative", layer.index});
    if (layer.multiplications < 1)
      out.push_back({"layer multiplications must be >= 1", layer.index});
    if (layer.output_bytes < 1)
      out.push_back({"layer output_bytes must be >= 1", layer.index});
  }
  std::unordered_set<int> seen_targets;
  for (const ResidualEdge& edge : model.residual_edges) {
    if (edge.target < 1 || edge.target > model.depth()) {
      out.push_back({"edge target outside the model", edge.target});
      continue;
    }
    if (edge.stride < 1 || edge.stride >= edge.target) {
      out.push_back({"edge source before layer 1", edge.target});
      continue;
    }
    if (!seen_targets.insert(edge.target).second) {
      out.push_back({"duplicate residual target", edge.target});
      continue;
    }
    if (edge.payload_bytes != model.layer(edge.source()).output_bytes) {
      out.push_back({"payload mismatch: edge payload differs from source layer output", edge.target});
    }
  }
  return out;
}

}  // namespace swarminfer
