#include "fsmlp/thematic_map.hpp"

#include <fstream>
#include <string>

#include "fsmlp/error.hpp"

namespace fsmlp {
namespace {

constexpr std::array<Rgb, 20> kPalette{{
    {230, 25, 75},  {60, 180, 75},   {255, 225, 25}, {0, 130, 200},   {245, 130, 48},
    {145, 30, 180}, {70, 240, 240},  {240, 50, 230}, {210, 245, 60},  {250, 190, 212},
    {0, 128, 128},  {220, 190, 255}, {170, 110, 40}, {255, 250, 200}, {128, 0, 0},
    {170, 255, 195}, {128, 128, 0},  {255, 215, 180}, {0, 0, 128},    {128, 128, 128},
}};

}  // namespace

Rgb palette_color(std::size_t class_index) { return kPalette[class_index % kPalette.size()]; }

void write_thematic_map(const HsiCube& cube, std::span<const int> predicted,
                        const std::filesystem::path& path) {
  if (predicted.size() != cube.pixel_count()) throw Error("thematic map: one prediction per pixel required");
  if (cube.labels.size() != cube.pixel_count()) throw Error("thematic map: label grid does not match cube");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "P6\n" << cube.width << ' ' << cube.height << "\n255\n";
  for (std::size_t i = 0; i < cube.pixel_count(); ++i) {
    Rgb c{0, 0, 0};
    if (cube.labels[i] != kUnknownLabel) c = palette_color(static_cast<std::size_t>(predicted[i]));
    out.write(reinterpret_cast<const char*>(c.data()), 3);
  }
}

void emit_thematic_map(const HsiCube& cube, const Classifier& classifier,
                       std::span<const std::size_t> subset, const std::filesystem::path& path) {
  cube.validate();
  for (auto b : subset)
    if (b >= cube.bands) throw Error("thematic map: band index out of range");
  if (subset.size() != classifier.mean.size())
    throw Error("thematic map: classifier expects " + std::to_string(classifier.mean.size()) +
                " bands, subset has " + std::to_string(subset.size()));
  const auto predicted = predict(classifier, cube.pixels.select_cols(subset));
  write_thematic_map(cube, predicted, path);
}

Raster read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::string magic;
  int maxval = 0;
  Raster r;
  in >> magic >> r.width >> r.height >> maxval;
  if (magic != "P6" || maxval != 255) throw Error(path.string() + ": not an 8-bit P6 image");
  in.get();
  r.pixels.resize(r.width * r.height);
  in.read(reinterpret_cast<char*>(r.pixels.data()), static_cast<std::streamsize>(r.pixels.size() * 3));
  if (!in) throw Error(path.string() + ": truncated image");
  return r;
}

}  // namespace fsmlp
