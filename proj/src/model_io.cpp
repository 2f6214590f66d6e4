#include "hebbd/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "hebbd/error.hpp"

namespace hebbd {

namespace {

constexpr std::uint8_t kNoDecoder = 0xFF;
constexpr std::uint8_t kMaxActivation = static_cast<std::uint8_t>(ActivationKind::InvSqrt);

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const std::uint8_t*>(p);
    buf.insert(buf.end(), c, c + n);
  }
  void u8(std::uint8_t v) { buf.push_back(v); }
  void u32(std::uint32_t v) {
    for (int k = 0; k < 4; ++k) buf.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void f64(double d) {
    const auto v = std::bit_cast<std::uint64_t>(d);
    for (int k = 0; k < 8; ++k) buf.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void f64s(std::span<const double> v) {
    for (double d : v) f64(d);
  }
  std::vector<std::uint8_t> buf;
};

class Reader {
 public:
  explicit Reader(std::vector<std::uint8_t> data) : buf_(std::move(data)) {}
  void need(std::size_t n, const char* what) {
    if (pos_ + n > buf_.size())
      throw ParseError(pos_, std::string("model file truncated while reading ") + what);
  }
  std::uint8_t u8(const char* what) {
    need(1, what);
    return buf_[pos_++];
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(buf_[pos_++]) << (8 * k);
    return v;
  }
  double f64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(buf_[pos_++]) << (8 * k);
    return std::bit_cast<double>(v);
  }
  Vector f64s(std::size_t n, const char* what) {
    need(n * 8, what);
    Vector v(n);
    for (double& d : v) d = f64(what);
    return v;
  }
  std::size_t pos() const noexcept { return pos_; }
  std::size_t size() const noexcept { return buf_.size(); }
  const std::uint8_t* at(std::size_t i) const { return buf_.data() + i; }

 private:
  std::vector<std::uint8_t> buf_;
  std::size_t pos_ = 0;
};

ActivationKind read_kind(Reader& r, std::uint8_t id) {
  if (id > kMaxActivation) throw ParseError(r.pos() - 1, "unknown activation id " + std::to_string(id));
  return static_cast<ActivationKind>(id);
}

}  // namespace

void save_model(const std::filesystem::path& path, const Model& model) {
  Writer w;
  w.bytes("HDN1", 4);
  if (const auto* layer = std::get_if<CenteredLayer>(&model)) {
    w.u32(static_cast<std::uint32_t>(layer->n_inputs()));
    w.u32(static_cast<std::uint32_t>(layer->n_outputs()));
    w.u8(static_cast<std::uint8_t>(layer->act.kind));
    w.u8(kNoDecoder);
    w.f64s(layer->W.data());
    w.f64s(layer->b);
    w.f64s(layer->mu);
    w.f64(layer->act.p1);
    w.f64(layer->act.p2);
  } else {
    const auto& ae = std::get<TiedAutoEncoder>(model);
    w.u32(static_cast<std::uint32_t>(ae.n_visible()));
    w.u32(static_cast<std::uint32_t>(ae.n_hidden()));
    w.u8(static_cast<std::uint8_t>(ae.enc_act.kind));
    w.u8(static_cast<std::uint8_t>(ae.dec_act.kind));
    w.f64s(ae.W.data());
    w.f64s(ae.b);
    w.f64s(ae.c);
    w.f64s(ae.mu);
    w.f64s(ae.lambda);
    w.f64(ae.enc_act.p1);
    w.f64(ae.enc_act.p2);
    w.f64(ae.dec_act.p1);
    w.f64(ae.dec_act.p2);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(w.buf.data()), static_cast<std::streamsize>(w.buf.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  Reader r(std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {}));
  r.need(4, "magic");
  if (std::memcmp(r.at(0), "HDN1", 4) != 0) throw ParseError(0, "bad magic, expected HDN1");
  r.u32("magic");
  const std::size_t n = r.u32("n");
  const std::size_t m = r.u32("m");
  if (n == 0 || m == 0) throw ParseError(4, "zero model dimension");
  const ActivationKind enc = read_kind(r, r.u8("activation id"));
  const std::uint8_t dec_id = r.u8("decoder activation id");

  Model result;
  if (dec_id == kNoDecoder) {
    CenteredLayer layer;
    layer.W = Matrix(n, m);
    const Vector w = r.f64s(n * m, "W");
    std::copy(w.begin(), w.end(), layer.W.data().begin());
    layer.b = r.f64s(m, "b");
    layer.mu = r.f64s(n, "mu");
    layer.act = {enc, r.f64("activation parameter"), r.f64("activation parameter")};
    result = std::move(layer);
  } else {
    const ActivationKind dec = read_kind(r, dec_id);
    TiedAutoEncoder ae;
    ae.W = Matrix(n, m);
    const Vector w = r.f64s(n * m, "W");
    std::copy(w.begin(), w.end(), ae.W.data().begin());
    ae.b = r.f64s(m, "b");
    ae.c = r.f64s(n, "c");
    ae.mu = r.f64s(n, "mu");
    ae.lambda = r.f64s(m, "lambda");
    ae.enc_act = {enc, r.f64("activation parameter"), r.f64("activation parameter")};
    ae.dec_act = {dec, r.f64("activation parameter"), r.f64("activation parameter")};
    result = std::move(ae);
  }
  if (r.pos() != r.size()) throw ParseError(r.pos(), "trailing bytes after model");
  return result;
}

}  // namespace hebbd
