#pragma once

#include <string>

#include "itre/image.hpp"

namespace itre {

// PNG or JPEG, sniffed by magic bytes. Gray and paletted inputs expand to
// RGB; alpha is dropped; 8-bit samples divide by 255, 16-bit by 65535.
ImagePlanar load_image(const std::string& path);

// 8-bit RGB PNG, samples round(v*255). Encoding settings are fixed so equal
// pixels give byte-identical files.
void save_png(const ImagePlanar& img, const std::string& path);

// Little-endian grayscale PFM (scale -1.0), float32.
void write_pfm(const GrayMap& g, const std::string& path);
GrayMap read_pfm(const std::string& path);

}  // namespace itre
