#include "itre/imageio.hpp"

#include <jpeglib.h>
#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

#include "itre/errors.hpp"

namespace itre {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open " + path);
  return f;
}

ImagePlanar from_interleaved8(const std::vector<unsigned char>& buf, int h,
                              int w) {
  ImagePlanar img(h, w, 3);
  const std::size_t n = img.plane_size();
  for (std::size_t i = 0; i < n; ++i) {
    img.plane(0)[i] = buf[3 * i] / 255.0;
    img.plane(1)[i] = buf[3 * i + 1] / 255.0;
    img.plane(2)[i] = buf[3 * i + 2] / 255.0;
  }
  return img;
}

ImagePlanar load_png_file(std::FILE* f, const std::string& path) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng: read struct allocation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng: info struct allocation failed");
  }

  std::vector<unsigned char> pixels;
  std::vector<png_bytep> rows;
  int width = 0, height = 0, depth = 8, channels = 0;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("failed to decode PNG: " + path);
  }

  png_init_io(png, f);
  png_read_info(png, info);

  png_byte color_type = png_get_color_type(png, info);
  depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY ||
      color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  width = int(png_get_image_width(png, info));
  height = int(png_get_image_height(png, info));
  depth = png_get_bit_depth(png, info);
  channels = png_get_channels(png, info);
  if (channels != 3 || (depth != 8 && depth != 16)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("unsupported PNG layout in " + path);
  }

  std::size_t rowbytes = png_get_rowbytes(png, info);
  pixels.resize(rowbytes * std::size_t(height));
  rows.resize(height);
  for (int y = 0; y < height; ++y) rows[y] = pixels.data() + rowbytes * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  ImagePlanar img(height, width, 3);
  const std::size_t n = img.plane_size();
  if (depth == 8) {
    for (std::size_t i = 0; i < n; ++i) {
      img.plane(0)[i] = pixels[3 * i] / 255.0;
      img.plane(1)[i] = pixels[3 * i + 1] / 255.0;
      img.plane(2)[i] = pixels[3 * i + 2] / 255.0;
    }
  } else {
    // PNG 16-bit samples are big-endian
    for (std::size_t i = 0; i < n; ++i) {
      for (int c = 0; c < 3; ++c) {
        std::size_t o = (3 * i + c) * 2;
        unsigned v = (unsigned(pixels[o]) << 8) | pixels[o + 1];
        img.plane(c)[i] = v / 65535.0;
      }
    }
  }
  return img;
}

struct JpegErrorMgr {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
  std::longjmp(mgr->jump, 1);
}

ImagePlanar load_jpeg_file(std::FILE* f, const std::string& path) {
  jpeg_decompress_struct cinfo;
  JpegErrorMgr err;
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_exit;

  std::vector<unsigned char> pixels;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw IoError("failed to decode JPEG: " + path);
  }

  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, f);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);

  const int width = int(cinfo.output_width);
  const int height = int(cinfo.output_height);
  const std::size_t rowbytes = std::size_t(width) * 3;
  pixels.resize(rowbytes * std::size_t(height));
  while (cinfo.output_scanline < cinfo.output_height) {
    unsigned char* row = pixels.data() + rowbytes * cinfo.output_scanline;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return from_interleaved8(pixels, height, width);
}

}  // namespace

ImagePlanar load_image(const std::string& path) {
  FilePtr f = open_file(path, "rb");
  unsigned char magic[8] = {0};
  std::size_t got = std::fread(magic, 1, sizeof(magic), f.get());
  std::rewind(f.get());
  if (got >= 8 && png_sig_cmp(magic, 0, 8) == 0)
    return load_png_file(f.get(), path);
  if (got >= 2 && magic[0] == 0xFF && magic[1] == 0xD8)
    return load_jpeg_file(f.get(), path);
  throw IoError("unsupported image format: " + path);
}

void save_png(const ImagePlanar& img, const std::string& path) {
  if (img.channels != 3) throw UsageError("save_png: expected 3 channels");
  FilePtr f = open_file(path, "wb");

  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng: write struct allocation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng: info struct allocation failed");
  }

  const std::size_t n = img.plane_size();
  std::vector<unsigned char> interleaved(n * 3);
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) {
      double v = img.plane(c)[i];
      v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
      interleaved[3 * i + c] =
          static_cast<unsigned char>(std::lround(v * 255.0));
    }
  }
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y)
    rows[y] = interleaved.data() + std::size_t(y) * img.width * 3;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed to write PNG: " + path);
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void write_pfm(const GrayMap& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path);
  out << "Pf\n" << g.width << " " << g.height << "\n-1.0\n";
  // rows bottom to top, little-endian float32
  std::vector<float> row(g.width);
  for (int y = g.height - 1; y >= 0; --y) {
    for (int x = 0; x < g.width; ++x) row[x] = float(g.at(y, x));
    out.write(reinterpret_cast<const char*>(row.data()),
              std::streamsize(row.size() * sizeof(float)));
  }
  if (!out) throw IoError("failed to write " + path);
}

GrayMap read_pfm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string tag;
  int w = 0, h = 0;
  double scale = 0.0;
  in >> tag >> w >> h >> scale;
  if (tag != "Pf" || w <= 0 || h <= 0 || scale >= 0.0)
    throw IoError("unsupported PFM header in " + path);
  in.get();  // the single whitespace after the scale line
  GrayMap g(h, w);
  std::vector<float> row(w);
  for (int y = h - 1; y >= 0; --y) {
    in.read(reinterpret_cast<char*>(row.data()),
            std::streamsize(row.size() * sizeof(float)));
    for (int x = 0; x < w; ++x) g.at(y, x) = row[x];
  }
  if (!in) throw IoError("truncated PFM: " + path);
  return g;
}

}  // namespace itre
