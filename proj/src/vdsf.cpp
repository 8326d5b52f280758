#include "vdlab/vdsf.hpp"

#include <bit>
#include <cstring>

#include "vdlab/io.hpp"

namespace vdlab {
namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

void put_f64(std::string& out, double x) {
  const auto v = std::bit_cast<std::uint64_t>(x);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  std::uint64_t take(int width) {
    need(width);
    std::uint64_t v = 0;
    for (int b = 0; b < width; ++b) v |= std::uint64_t(static_cast<unsigned char>(bytes_[pos_ + b])) << (8 * b);
    pos_ += width;
    return v;
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(take(4)); }
  double f64() { return std::bit_cast<double>(take(8)); }
  std::string text(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw InputError("VDSF: truncated file");
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

const RealVector& Snapshot::field(const std::string& name) const {
  for (const auto& f : fields) {
    if (f.name == name) return f.values;
  }
  throw InputError("VDSF: no field named '" + name + "'");
}

std::string encode_vdsf(const Snapshot& snapshot) {
  const Lattice& lat = snapshot.lattice;
  std::string out = "VDSF";
  put_u32(out, kVdsfVersion);
  put_u32(out, static_cast<std::uint32_t>(lat.dim()));
  put_u32(out, static_cast<std::uint32_t>(lat.points()));
  put_f64(out, lat.period());
  put_u32(out, static_cast<std::uint32_t>(snapshot.fields.size()));
  for (const auto& f : snapshot.fields) {
    put_u32(out, static_cast<std::uint32_t>(f.name.size()));
    out += f.name;
  }
  for (const auto& f : snapshot.fields) {
    if (f.values.size() != lat.size()) throw InputError("VDSF: field '" + f.name + "' does not match the lattice");
    for (double x : f.values) put_f64(out, x);
  }
  return out;
}

Snapshot decode_vdsf(const std::string& bytes) {
  Reader in(bytes);
  if (in.text(4) != "VDSF") throw InputError("VDSF: bad magic");
  const auto version = in.u32();
  if (version != kVdsfVersion) throw InputError("VDSF: unsupported version " + std::to_string(version));
  const auto dim = in.u32();
  const auto points = in.u32();
  const double period = in.f64();
  if (dim > 3 || points > (1u << 12)) throw InputError("VDSF: implausible lattice header");
  Snapshot snap{Lattice(static_cast<int>(dim), static_cast<int>(points), period), {}};
  const auto count = in.u32();
  if (count > 4096) throw InputError("VDSF: implausible field count");
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto len = in.u32();
    snap.fields.push_back({in.text(len), {}});
  }
  for (auto& f : snap.fields) {
    f.values.resize(snap.lattice.size());
    for (auto& x : f.values) x = in.f64();
  }
  if (!in.at_end()) throw InputError("VDSF: trailing bytes after the last field");
  return snap;
}

void write_vdsf(const std::filesystem::path& path, const Snapshot& snapshot) {
  write_file_atomic(path, encode_vdsf(snapshot));
}

Snapshot read_vdsf(const std::filesystem::path& path) { return decode_vdsf(read_file(path)); }

}  // namespace vdlab
