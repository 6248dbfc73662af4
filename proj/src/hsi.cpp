#include "fsmlp/hsi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "fsmlp/error.hpp"
#include "fsmlp/log.hpp"

namespace fsmlp {
namespace {

template <typename T>
std::vector<double> read_binary_as(const std::filesystem::path& path, std::size_t count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<T> raw(count);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count * sizeof(T)));
  if (static_cast<std::size_t>(in.gcount()) != count * sizeof(T))
    throw Error(path.string() + ": expected " + std::to_string(count * sizeof(T)) + " bytes");
  return {raw.begin(), raw.end()};
}

std::vector<double> read_text_numbers(const std::filesystem::path& path, std::size_t count) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream tokens(text);
  std::vector<double> out;
  out.reserve(count);
  double v = 0.0;
  while (tokens >> v) out.push_back(v);
  if (!tokens.eof()) throw Error(path.string() + ": non-numeric token");
  if (out.size() != count)
    throw Error(path.string() + ": expected " + std::to_string(count) + " values, got " +
                std::to_string(out.size()));
  return out;
}

std::vector<double> read_values(const std::filesystem::path& path, const std::string& dtype,
                                std::size_t count) {
  if (dtype == "text") return read_text_numbers(path, count);
  if (dtype == "float32") return read_binary_as<float>(path, count);
  if (dtype == "float64") return read_binary_as<double>(path, count);
  if (dtype == "uint16") return read_binary_as<std::uint16_t>(path, count);
  if (dtype == "int16") return read_binary_as<std::int16_t>(path, count);
  if (dtype == "uint8") return read_binary_as<std::uint8_t>(path, count);
  if (dtype == "int32") return read_binary_as<std::int32_t>(path, count);
  throw Error("unsupported dtype '" + dtype + "'");
}

}  // namespace

void HsiCube::validate() const {
  if (height == 0 || width == 0 || bands == 0) throw Error("HsiCube: empty dimension");
  if (pixels.rows() != pixel_count() || pixels.cols() != bands)
    throw Error("HsiCube: pixel matrix does not match H x W x P");
  if (labels.size() != pixel_count()) throw Error("HsiCube: label grid does not match H x W");
}

HsiCube load_hsi(const std::filesystem::path& descriptor) {
  std::ifstream in(descriptor);
  if (!in) throw Error("cannot open " + descriptor.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(descriptor.string() + ": " + e.what());
  }
  const auto base = descriptor.parent_path();
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
  };

  HsiCube cube;
  try {
    cube.height = j.at("H").get<std::size_t>();
    cube.width = j.at("W").get<std::size_t>();
    cube.bands = j.at("P").get<std::size_t>();
    const auto dtype = j.at("dtype").get<std::string>();
    const auto layout = j.value("layout", std::string("bip"));
    const auto label_dtype = j.value("label_dtype", std::string("text"));
    const std::size_t npix = cube.height * cube.width;

    auto values = read_values(resolve(j.at("data_file").get<std::string>()), dtype, npix * cube.bands);
    if (layout == "bip") {
      cube.pixels = Matrix(npix, cube.bands, std::move(values));
    } else if (layout == "bsq") {
      cube.pixels = Matrix(npix, cube.bands);
      for (std::size_t b = 0; b < cube.bands; ++b)
        for (std::size_t i = 0; i < npix; ++i) cube.pixels(i, b) = values[b * npix + i];
    } else {
      throw Error("unsupported layout '" + layout + "'");
    }

    const auto raw_labels = read_values(resolve(j.at("label_file").get<std::string>()), label_dtype, npix);
    cube.labels.reserve(npix);
    for (double v : raw_labels) {
      if (v < 0 || v != std::floor(v)) throw Error("label file: labels must be non-negative integers");
      cube.labels.push_back(static_cast<int>(v));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(descriptor.string() + ": " + e.what());
  }
  cube.validate();
  return cube;
}

HsiCube minmax_scale(HsiCube cube) {
  auto flat = cube.pixels.flat();
  if (flat.empty()) return cube;
  const auto [lo_it, hi_it] = std::minmax_element(flat.begin(), flat.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) {
    log::warn("minmax_scale: cube is constant; mapped to zeros");
    cube.pixels.fill(0.0);
    return cube;
  }
  for (double& v : flat) v = (v - lo) / (hi - lo);
  return cube;
}

HsiCube mean_center_channels(HsiCube cube) {
  if (cube.bands == 0 || cube.pixels.rows() == 0) throw Error("mean_center_channels: empty cube");
  const double n = static_cast<double>(cube.pixels.rows());
  for (std::size_t b = 0; b < cube.pixels.cols(); ++b) {
    double mean = 0.0;
    for (std::size_t i = 0; i < cube.pixels.rows(); ++i) mean += cube.pixels(i, b);
    mean /= n;
    for (std::size_t i = 0; i < cube.pixels.rows(); ++i) cube.pixels(i, b) -= mean;
  }
  return cube;
}

Dataset annotated_pixels(const HsiCube& cube) {
  cube.validate();
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < cube.labels.size(); ++i)
    if (cube.labels[i] != kUnknownLabel) idx.push_back(i);
  if (idx.empty()) throw Error("annotated_pixels: cube has no annotated pixels");

  std::map<int, int> code;
  for (auto i : idx) code.emplace(cube.labels[i], 0);
  Dataset d;
  for (auto& [raw, dense] : code) {
    dense = static_cast<int>(d.class_names.size());
    d.class_names.push_back(std::to_string(raw));
  }
  d.x = cube.pixels.select_rows(idx);
  for (auto i : idx) d.labels.push_back(code.at(cube.labels[i]));
  d.source_rows = idx;
  d.class_count = code.size();
  for (std::size_t b = 0; b < cube.bands; ++b) d.feature_names.push_back("band" + std::to_string(b));
  d.validate();
  return d;
}

}  // namespace fsmlp
