/*
 * Copyright 2026 The FCER Toolkit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fcer/npy.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace fcer::npy {

static_assert(std::endian::native == std::endian::little, "NPY I/O assumes a little-endian host");

namespace {

constexpr std::string_view kMagic("\x93NUMPY", 6);
constexpr std::size_t kAlign = 64;

class HeaderParser {
 public:
  explicit HeaderParser(std::string_view text) : text_(text) {}

  Array parse() {
    Array out;
    bool have_descr = false;
    bool have_order = false;
    bool have_shape = false;
    skip_ws();
    expect('{');
    while (true) {
      skip_ws();
      if (peek() == '}') break;
      const std::string key = quoted();
      skip_ws();
      expect(':');
      skip_ws();
      if (key == "descr") {
        out.dtype = parse_descr(quoted());
        have_descr = true;
      } else if (key == "fortran_order") {
        if (text_.substr(pos_, 4) == "True") {
          throw ParseError("npy: Fortran-order arrays are not supported");
        }
        if (text_.substr(pos_, 5) != "False") throw ParseError("npy: bad fortran_order value");
        pos_ += 5;
        have_order = true;
      } else if (key == "shape") {
        out.shape = shape();
        have_shape = true;
      } else {
        throw ParseError("npy: unexpected header key '" + key + "'");
      }
      skip_ws();
      if (peek() == ',') ++pos_;
    }
    if (!have_descr || !have_order || !have_shape) throw ParseError("npy: incomplete header");
    return out;
  }

 private:
  char peek() const {
    if (pos_ >= text_.size()) throw ParseError("npy: truncated header");
    return text_[pos_];
  }
  void expect(char c) {
    if (peek() != c) throw ParseError(std::string("npy: expected '") + c + "' in header");
    ++pos_;
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  std::string quoted() {
    const char q = peek();
    if (q != '\'' && q != '"') throw ParseError("npy: expected quoted string in header");
    ++pos_;
    const auto end = text_.find(q, pos_);
    if (end == std::string_view::npos) throw ParseError("npy: unterminated string in header");
    std::string s(text_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return s;
  }
  std::vector<std::size_t> shape() {
    std::vector<std::size_t> dims;
    expect('(');
    while (true) {
      skip_ws();
      if (peek() == ')') {
        ++pos_;
        break;
      }
      if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError("npy: bad shape");
      std::size_t v = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        v = v * 10 + static_cast<std::size_t>(text_[pos_] - '0');
        ++pos_;
      }
      dims.push_back(v);
      skip_ws();
      if (peek() == ',') ++pos_;
    }
    return dims;
  }
  static DType parse_descr(const std::string& d) {
    if (d == "<f4") return DType::kFloat32;
    if (d == "<f8") return DType::kFloat64;
    if (d == "|u1" || d == "<u1" || d == "u1") return DType::kUInt8;
    if (d == "|b1") return DType::kBool;
    throw ParseError("npy: unsupported dtype '" + d + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::uint32_t read_le(std::string_view bytes, std::size_t offset, std::size_t width) {
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < width; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
  }
  return v;
}

template <typename Out, typename In>
Grid<Out> convert(const Array& array) {
  Grid<Out> grid(static_cast<Index>(array.shape[0]), static_cast<Index>(array.shape[1]));
  const auto* src = reinterpret_cast<const In*>(array.bytes.data());
  for (Index i = 0; i < grid.size(); ++i) grid.data()[i] = static_cast<Out>(src[i]);
  return grid;
}

void require_2d(const Array& array, const std::filesystem::path& path) {
  if (array.shape.size() != 2) {
    throw ShapeError(path.string() + ": expected a 2-D array, got " +
                     std::to_string(array.shape.size()) + "-D");
  }
}

}  // namespace

std::string_view descr(DType dtype) {
  switch (dtype) {
    case DType::kFloat32: return "<f4";
    case DType::kFloat64: return "<f8";
    case DType::kUInt8: return "|u1";
    case DType::kBool: return "|b1";
  }
  return "";
}

std::size_t item_size(DType dtype) {
  switch (dtype) {
    case DType::kFloat32: return 4;
    case DType::kFloat64: return 8;
    case DType::kUInt8:
    case DType::kBool: return 1;
  }
  return 0;
}

std::size_t Array::element_count() const {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

Array decode(std::string_view file) {
  if (file.size() < 10 || file.substr(0, 6) != kMagic) throw ParseError("npy: bad magic string");
  const int major = static_cast<unsigned char>(file[6]);
  std::size_t header_len = 0;
  std::size_t offset = 0;
  if (major == 1) {
    header_len = read_le(file, 8, 2);
    offset = 10;
  } else if (major == 2) {
    if (file.size() < 12) throw ParseError("npy: truncated preamble");
    header_len = read_le(file, 8, 4);
    offset = 12;
  } else {
    throw ParseError("npy: unsupported format version " + std::to_string(major));
  }
  if (offset + header_len > file.size()) throw ParseError("npy: truncated header");
  Array out = HeaderParser(file.substr(offset, header_len)).parse();
  const std::size_t payload = out.element_count() * item_size(out.dtype);
  const std::size_t data_offset = offset + header_len;
  if (file.size() - data_offset != payload) {
    throw ParseError("npy: payload size " + std::to_string(file.size() - data_offset) +
                     " does not match header (" + std::to_string(payload) + " bytes)");
  }
  out.bytes.assign(file.begin() + static_cast<std::ptrdiff_t>(data_offset), file.end());
  return out;
}

std::string encode(const Array& array) {
  if (array.bytes.size() != array.element_count() * item_size(array.dtype)) {
    throw ShapeError("npy: byte count does not match shape");
  }
  std::ostringstream dict;
  dict << "{'descr': '" << descr(array.dtype) << "', 'fortran_order': False, 'shape': (";
  for (std::size_t i = 0; i < array.shape.size(); ++i) {
    dict << array.shape[i];
    if (array.shape.size() == 1 || i + 1 < array.shape.size()) dict << ",";
    if (i + 1 < array.shape.size()) dict << " ";
  }
  dict << "), }";
  std::string header = dict.str();
  const std::size_t unpadded = kMagic.size() + 2 + 2 + header.size() + 1;
  header.append((kAlign - unpadded % kAlign) % kAlign, ' ');
  header.push_back('\n');
  if (header.size() > 0xFFFF) throw ShapeError("npy: header too long for format 1.0");

  std::string out;
  out.reserve(kMagic.size() + 4 + header.size() + array.bytes.size());
  out.append(kMagic);
  out.push_back('\x01');
  out.push_back('\x00');
  out.push_back(static_cast<char>(header.size() & 0xFF));
  out.push_back(static_cast<char>((header.size() >> 8) & 0xFF));
  out.append(header);
  out.append(array.bytes.begin(), array.bytes.end());
  return out;
}

Array read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode(content);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write(const std::filesystem::path& path, const Array& array) {
  const std::string image = encode(array);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out.write(image.data(), static_cast<std::streamsize>(image.size()));
  if (!out) throw ValidationError("write failed for " + path.string());
}

ProbabilityMap load_probability(const std::filesystem::path& path) {
  const Array array = read(path);
  require_2d(array, path);
  ProbabilityMap prob;
  switch (array.dtype) {
    case DType::kFloat32: prob = to_grid<float>(array); break;
    case DType::kFloat64: prob = convert<float, double>(array); break;
    default: throw ParseError(path.string() + ": probability maps must be float32 or float64");
  }
  validate_probability(prob, path.string());
  return prob;
}

UncertaintyMap load_uncertainty(const std::filesystem::path& path) {
  const Array array = read(path);
  require_2d(array, path);
  UncertaintyMap unc;
  switch (array.dtype) {
    case DType::kFloat32: unc = to_grid<float>(array); break;
    case DType::kFloat64: unc = convert<float, double>(array); break;
    default: throw ParseError(path.string() + ": uncertainty maps must be float32 or float64");
  }
  validate_uncertainty(unc, path.string());
  return unc;
}

BinaryMask load_mask(const std::filesystem::path& path) {
  const Array array = read(path);
  require_2d(array, path);
  auto check_float = [&](const auto& g) {
    for (Index i = 0; i < g.size(); ++i) {
      const double v = g.data()[i];
      if (!(v == 0.0 || v == 1.0)) {
        throw ValidationError(path.string() + ": mask value other than 0 or 1");
      }
    }
    return g.template cast<std::uint8_t>().eval();
  };
  BinaryMask mask;
  switch (array.dtype) {
    case DType::kUInt8:
    case DType::kBool: mask = convert<std::uint8_t, std::uint8_t>(array); break;
    case DType::kFloat32: mask = check_float(to_grid<float>(array)); break;
    case DType::kFloat64: mask = check_float(to_grid<double>(array)); break;
  }
  validate_mask(mask, path.string());
  return mask;
}

FeatureStack load_features(const std::filesystem::path& path) {
  const Array array = read(path);
  if (array.shape.size() != 3) {
    throw ShapeError(path.string() + ": expected a 3-D (C,H,W) array, got " +
                     std::to_string(array.shape.size()) + "-D");
  }
  if (array.dtype != DType::kFloat32) throw ParseError(path.string() + ": features must be float32");
  FeatureStack stack;
  stack.height = static_cast<Index>(array.shape[1]);
  stack.width = static_cast<Index>(array.shape[2]);
  stack.data.resize(static_cast<Index>(array.shape[0]), stack.height * stack.width);
  std::memcpy(stack.data.data(), array.bytes.data(), array.bytes.size());
  validate_features(stack, path.string());
  return stack;
}

void save_features(const FeatureStack& stack, const std::filesystem::path& path) {
  Array array;
  array.dtype = DType::kFloat32;
  array.shape = {static_cast<std::size_t>(stack.channels()), static_cast<std::size_t>(stack.height),
                 static_cast<std::size_t>(stack.width)};
  array.bytes.resize(sizeof(float) * static_cast<std::size_t>(stack.data.size()));
  std::memcpy(array.bytes.data(), stack.data.data(), array.bytes.size());
  write(path, array);
}

}  // namespace fcer::npy
