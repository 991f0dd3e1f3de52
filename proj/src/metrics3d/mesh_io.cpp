#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "common/error.hpp"
#include "common/fileio.hpp"
#include "metrics3d/mesh.hpp"

namespace fs = std::filesystem;

namespace occbench::metrics3d {
namespace {

std::string lower_ext(const fs::path& p) {
  std::string e = p.extension().string();
  for (char& c : e) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return e;
}

void add_polygon(TriMesh& mesh, const std::vector<long long>& idx, const std::string& where) {
  if (idx.size() < 3) throw FormatError(where + ": face with fewer than 3 vertices");
  for (long long i : idx)
    if (i < 0 || static_cast<size_t>(i) >= mesh.vertices.size())
      throw FormatError(where + ": vertex index " + std::to_string(i) + " out of range (" +
                        std::to_string(mesh.vertices.size()) + " vertices)");
  for (size_t k = 1; k + 1 < idx.size(); ++k)
    mesh.faces.push_back({static_cast<uint32_t>(idx[0]), static_cast<uint32_t>(idx[k]),
                          static_cast<uint32_t>(idx[k + 1])});
}

// ---- PLY ------------------------------------------------------------------

enum class PlyType { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

PlyType parse_ply_type(const std::string& t, const std::string& where) {
  if (t == "char" || t == "int8") return PlyType::Int8;
  if (t == "uchar" || t == "uint8") return PlyType::UInt8;
  if (t == "short" || t == "int16") return PlyType::Int16;
  if (t == "ushort" || t == "uint16") return PlyType::UInt16;
  if (t == "int" || t == "int32") return PlyType::Int32;
  if (t == "uint" || t == "uint32") return PlyType::UInt32;
  if (t == "float" || t == "float32") return PlyType::Float32;
  if (t == "double" || t == "float64") return PlyType::Float64;
  throw FormatError(where + ": unknown PLY property type '" + t + "'");
}

size_t ply_size(PlyType t) {
  switch (t) {
    case PlyType::Int8:
    case PlyType::UInt8: return 1;
    case PlyType::Int16:
    case PlyType::UInt16: return 2;
    case PlyType::Int32:
    case PlyType::UInt32:
    case PlyType::Float32: return 4;
    case PlyType::Float64: return 8;
  }
  return 0;
}

struct PlyProperty {
  std::string name;
  PlyType type = PlyType::Float32;
  bool is_list = false;
  PlyType count_type = PlyType::UInt8;
};

struct PlyElement {
  std::string name;
  size_t count = 0;
  std::vector<PlyProperty> props;
};

enum class PlyFormat { Ascii, BinaryLE, BinaryBE };

class PlyReader {
public:
  PlyReader(const std::vector<uint8_t>& data, size_t offset, PlyFormat format, std::string file)
      : data_(data), pos_(offset), format_(format), file_(std::move(file)) {}

  double read(PlyType t, const std::string& what) {
    if (format_ == PlyFormat::Ascii) return read_ascii(what);
    const size_t n = ply_size(t);
    if (pos_ + n > data_.size()) throw FormatError(file_ + ": truncated " + what);
    uint8_t buf[8];
    std::memcpy(buf, data_.data() + pos_, n);
    pos_ += n;
    const bool swap = (format_ == PlyFormat::BinaryBE) == (std::endian::native == std::endian::little);
    if (swap) std::reverse(buf, buf + n);
    switch (t) {
      case PlyType::Int8: return static_cast<int8_t>(buf[0]);
      case PlyType::UInt8: return buf[0];
      case PlyType::Int16: { int16_t v; std::memcpy(&v, buf, 2); return v; }
      case PlyType::UInt16: { uint16_t v; std::memcpy(&v, buf, 2); return v; }
      case PlyType::Int32: { int32_t v; std::memcpy(&v, buf, 4); return v; }
      case PlyType::UInt32: { uint32_t v; std::memcpy(&v, buf, 4); return v; }
      case PlyType::Float32: { float v; std::memcpy(&v, buf, 4); return v; }
      case PlyType::Float64: { double v; std::memcpy(&v, buf, 8); return v; }
    }
    return 0;
  }

private:
  double read_ascii(const std::string& what) {
    while (pos_ < data_.size() && std::isspace(data_[pos_])) ++pos_;
    const size_t start = pos_;
    while (pos_ < data_.size() && !std::isspace(data_[pos_])) ++pos_;
    if (start == pos_) throw FormatError(file_ + ": truncated " + what);
    const std::string tok(reinterpret_cast<const char*>(data_.data()) + start, pos_ - start);
    try {
      size_t used = 0;
      double v = std::stod(tok, &used);
      if (used == tok.size()) return v;
    } catch (const std::exception&) {
    }
    throw FormatError(file_ + ": bad number '" + tok + "' in " + what);
  }

  const std::vector<uint8_t>& data_;
  size_t pos_;
  PlyFormat format_;
  std::string file_;
};

}  // namespace

TriMesh load_obj(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  TriMesh mesh;
  std::string line;
  size_t lineno = 0;
  std::vector<long long> idx;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    if (tag == "v") {
      Vec3 v;
      if (!(ss >> v.x >> v.y >> v.z)) throw FormatError(where + ": malformed vertex");
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      idx.clear();
      std::string tok;
      while (ss >> tok) {
        const std::string head = tok.substr(0, tok.find('/'));
        long long i = 0;
        try {
          size_t used = 0;
          i = std::stoll(head, &used);
          if (used != head.size()) throw std::invalid_argument(head);
        } catch (const std::exception&) {
          throw FormatError(where + ": malformed face index '" + tok + "'");
        }
        if (i == 0) throw FormatError(where + ": face index 0 is invalid in OBJ");
        idx.push_back(i > 0 ? i - 1 : static_cast<long long>(mesh.vertices.size()) + i);
      }
      add_polygon(mesh, idx, where);
    }
  }
  validate_mesh(mesh, path.string());
  return mesh;
}

TriMesh load_ply(const fs::path& path) {
  const std::vector<uint8_t> data = read_file_bytes(path);
  const std::string file = path.string();
  size_t pos = 0;
  auto next_line = [&]() -> std::string {
    if (pos >= data.size()) throw FormatError(file + ": PLY header not terminated");
    size_t end = pos;
    while (end < data.size() && data[end] != '\n') ++end;
    std::string l(reinterpret_cast<const char*>(data.data()) + pos, end - pos);
    pos = end + 1;
    if (!l.empty() && l.back() == '\r') l.pop_back();
    return l;
  };

  if (next_line() != "ply") throw FormatError(file + ": missing 'ply' magic");
  PlyFormat format = PlyFormat::Ascii;
  bool have_format = false;
  std::vector<PlyElement> elements;
  for (size_t lineno = 2;; ++lineno) {
    const std::string where = file + ":" + std::to_string(lineno);
    std::istringstream ss(next_line());
    std::string tag;
    if (!(ss >> tag)) continue;
    if (tag == "end_header") break;
    if (tag == "comment" || tag == "obj_info") continue;
    if (tag == "format") {
      std::string f;
      ss >> f;
      if (f == "ascii") format = PlyFormat::Ascii;
      else if (f == "binary_little_endian") format = PlyFormat::BinaryLE;
      else if (f == "binary_big_endian") format = PlyFormat::BinaryBE;
      else throw FormatError(where + ": unknown PLY format '" + f + "'");
      have_format = true;
    } else if (tag == "element") {
      PlyElement e;
      if (!(ss >> e.name >> e.count)) throw FormatError(where + ": malformed element line");
      elements.push_back(std::move(e));
    } else if (tag == "property") {
      if (elements.empty()) throw FormatError(where + ": property before any element");
      PlyProperty p;
      std::string t;
      ss >> t;
      if (t == "list") {
        std::string ct, it;
        ss >> ct >> it >> p.name;
        p.is_list = true;
        p.count_type = parse_ply_type(ct, where);
        p.type = parse_ply_type(it, where);
      } else {
        p.type = parse_ply_type(t, where);
        ss >> p.name;
      }
      if (p.name.empty()) throw FormatError(where + ": property without a name");
      elements.back().props.push_back(std::move(p));
    } else {
      throw FormatError(where + ": unexpected header line '" + tag + "'");
    }
  }
  if (!have_format) throw FormatError(file + ": PLY header has no format line");

  TriMesh mesh;
  PlyReader reader(data, pos, format, file);
  bool saw_vertex = false, saw_face = false;
  std::vector<long long> idx;
  for (const auto& e : elements) {
    const bool is_vertex = e.name == "vertex", is_face = e.name == "face";
    int cx = -1, cy = -1, cz = -1, cf = -1;
    for (int i = 0; i < static_cast<int>(e.props.size()); ++i) {
      const auto& n = e.props[i].name;
      if (n == "x") cx = i;
      if (n == "y") cy = i;
      if (n == "z") cz = i;
      if ((n == "vertex_indices" || n == "vertex_index") && e.props[i].is_list) cf = i;
    }
    if (is_vertex && (cx < 0 || cy < 0 || cz < 0)) throw FormatError(file + ": vertex element lacks x/y/z");
    if (is_face && cf < 0) throw FormatError(file + ": face element lacks a vertex_indices list");
    if (is_face && !saw_vertex) throw FormatError(file + ": face element precedes vertex element");
    saw_vertex |= is_vertex;
    saw_face |= is_face;
    for (size_t k = 0; k < e.count; ++k) {
      const std::string what = "element '" + e.name + "' #" + std::to_string(k);
      Vec3 v;
      for (int i = 0; i < static_cast<int>(e.props.size()); ++i) {
        const auto& p = e.props[i];
        if (p.is_list) {
          const double n = reader.read(p.count_type, what);
          if (n < 0 || n != std::floor(n)) throw FormatError(file + ": bad list length in " + what);
          if (i == cf) idx.clear();
          for (long long j = 0; j < static_cast<long long>(n); ++j) {
            const double value = reader.read(p.type, what);
            if (i == cf) idx.push_back(static_cast<long long>(value));
          }
          if (is_face && i == cf) add_polygon(mesh, idx, file + ": " + what);
        } else {
          const double value = reader.read(p.type, what);
          if (is_vertex) {
            if (i == cx) v.x = value;
            if (i == cy) v.y = value;
            if (i == cz) v.z = value;
          }
        }
      }
      if (is_vertex) mesh.vertices.push_back(v);
    }
  }
  if (!saw_vertex) throw FormatError(file + ": no vertex element");
  if (!saw_face) throw FormatError(file + ": no face element");
  validate_mesh(mesh, file);
  return mesh;
}

TriMesh load_mesh(const fs::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".obj") return load_obj(path);
  if (ext == ".ply") return load_ply(path);
  throw FormatError(path.string() + ": unsupported mesh format (expected .obj or .ply)");
}

void write_obj(const fs::path& path, const TriMesh& mesh) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& v : mesh.vertices) out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
  for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  write_file_atomic(path, out.str());
}

}  // namespace occbench::metrics3d
