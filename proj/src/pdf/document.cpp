#include "reviewaudit/pdf/document.hpp"

#include <zlib.h>

#include <cmath>
#include <cstring>
#include <functional>
#include <set>

#include "reviewaudit/core/error.hpp"
#include "reviewaudit/core/log.hpp"

namespace reviewaudit::pdf {

std::vector<int> Document::page_numbers() const {
  std::vector<int> out;
  const Object* root = resolve_key(trailer, "Root");
  if (!root || !root->is_dict()) return out;
  std::set<int> seen;
  std::function<void(const Object*)> walk = [&](const Object* node_ref) {
    if (!node_ref) return;
    int num = -1;
    if (node_ref->is_ref()) num = node_ref->ref().num;
    const Object* node = resolve(node_ref);
    if (!node || !node->is_dict()) return;
    if (num >= 0 && !seen.insert(num).second) return;  // cycle guard
    const Dict& d = node->dict();
    if (const Object* kids = resolve(d.find("Kids")); kids && kids->is_array()) {
      for (const Object& kid : kids->array()) walk(&kid);
      return;
    }
    const Object* type = d.find("Type");
    const bool is_page = type && type->is_name() && type->name() == "Page";
    if ((is_page || d.has("Contents") || d.has("MediaBox")) && num >= 0) out.push_back(num);
  };
  walk(root->dict().find("Pages"));
  return out;
}

std::string Document::page_content(int page_num) const {
  const Object* page = get(page_num);
  if (!page || !page->is_dict()) return {};
  const Object* contents = resolve(page->dict().find("Contents"));
  if (!contents) return {};
  std::string out;
  auto append_stream = [&](const Object* o) {
    o = resolve(o);
    if (!o || !o->is_stream()) return;
    if (auto data = decode_stream(*this, o->stream())) {
      if (!out.empty()) out.push_back('\n');
      out += *data;
    } else {
      log::warn("skipping content stream with unsupported filter");
    }
  };
  if (contents->is_array()) {
    for (const Object& part : contents->array()) append_stream(&part);
  } else {
    append_stream(contents);
  }
  return out;
}

namespace {

// Walk a page's /Parent chain looking for an inheritable attribute.
const Object* inherited_attr(const Document& doc, int page_num, const std::string& key) {
  const Object* node = doc.get(page_num);
  int guard = 0;
  while (node && node->is_dict()) {
    if (const Object* v = doc.resolve_key(node->dict(), key)) return v;
    if (++guard > 64) break;
    node = doc.resolve(node->dict().find("Parent"));
  }
  return nullptr;
}

}  // namespace

std::array<double, 4> Document::media_box(int page_num) const {
  if (const Object* box = inherited_attr(*this, page_num, "MediaBox");
      box && box->is_array() && box->array().size() == 4) {
    std::array<double, 4> out{};
    bool ok = true;
    for (int i = 0; i < 4; ++i) {
      const Object* v = resolve(&box->array()[i]);
      if (v && v->is_number())
        out[i] = v->number();
      else
        ok = false;
    }
    if (ok) return out;
  }
  return {0.0, 0.0, 612.0, 792.0};  // US Letter
}

const Dict* Document::resources(int page_num) const {
  if (const Object* res = inherited_attr(*this, page_num, "Resources");
      res && res->is_dict())
    return &res->dict();
  return nullptr;
}

std::string zlib_inflate(const std::string& data) {
  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) throw MalformedPdf("zlib initialization failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  std::string out;
  char buf[16384];
  int ret = Z_OK;
  do {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof buf;
    ret = inflate(&zs, Z_NO_FLUSH);
    if (ret != Z_OK && ret != Z_STREAM_END && ret != Z_BUF_ERROR) {
      inflateEnd(&zs);
      throw MalformedPdf("corrupt flate stream");
    }
    out.append(buf, sizeof buf - zs.avail_out);
    if (ret == Z_BUF_ERROR && zs.avail_in == 0) break;  // truncated input
  } while (ret != Z_STREAM_END);
  if (ret != Z_STREAM_END) log::warn("flate stream ended prematurely");
  inflateEnd(&zs);
  return out;
}

std::string zlib_deflate(const std::string& data) {
  z_stream zs{};
  if (deflateInit(&zs, Z_DEFAULT_COMPRESSION) != Z_OK)
    throw MalformedPdf("zlib initialization failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  std::string out;
  char buf[16384];
  int ret = Z_OK;
  do {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof buf;
    ret = deflate(&zs, Z_FINISH);
    out.append(buf, sizeof buf - zs.avail_out);
  } while (ret != Z_STREAM_END);
  deflateEnd(&zs);
  return out;
}

namespace {

std::string apply_png_predictor(const std::string& data, int colors, int bpc, int columns) {
  const int bpp = std::max(1, colors * bpc / 8);
  const std::size_t row_len =
      static_cast<std::size_t>((static_cast<long long>(colors) * bpc * columns + 7) / 8);
  std::string out;
  std::vector<unsigned char> prev(row_len, 0);
  std::vector<unsigned char> cur(row_len, 0);
  std::size_t p = 0;
  while (p + 1 + row_len <= data.size() + row_len && p < data.size()) {
    const unsigned char tag = static_cast<unsigned char>(data[p++]);
    const std::size_t avail = std::min(row_len, data.size() - p);
    std::memcpy(cur.data(), data.data() + p, avail);
    std::fill(cur.begin() + static_cast<long>(avail), cur.end(), 0);
    p += avail;
    for (std::size_t i = 0; i < row_len; ++i) {
      const int a = i >= static_cast<std::size_t>(bpp) ? cur[i - bpp] : 0;  // left
      const int b = prev[i];                                               // up
      const int c = i >= static_cast<std::size_t>(bpp) ? prev[i - bpp] : 0;  // up-left
      int pred = 0;
      switch (tag) {
        case 0: pred = 0; break;
        case 1: pred = a; break;
        case 2: pred = b; break;
        case 3: pred = (a + b) / 2; break;
        case 4: {
          const int pp = a + b - c;
          const int pa = std::abs(pp - a), pb = std::abs(pp - b), pc = std::abs(pp - c);
          pred = (pa <= pb && pa <= pc) ? a : (pb <= pc ? b : c);
          break;
        }
        default: throw MalformedPdf("unknown PNG predictor tag");
      }
      cur[i] = static_cast<unsigned char>((cur[i] + pred) & 0xFF);
    }
    out.append(reinterpret_cast<const char*>(cur.data()), row_len);
    std::swap(prev, cur);
  }
  return out;
}

using Resolver = std::function<const Object*(const Object*)>;

std::optional<std::string> decode_impl(const Stream& stream, const Resolver& resolve) {
  const Object* filter = resolve(stream.dict.find("Filter"));
  if (!filter || filter->is_null()) return stream.raw;

  std::vector<std::string> filters;
  if (filter->is_name()) {
    filters.push_back(filter->name());
  } else if (filter->is_array()) {
    for (const Object& f : filter->array()) {
      const Object* fr = resolve(&f);
      if (!fr || !fr->is_name()) return std::nullopt;
      filters.push_back(fr->name());
    }
  } else {
    return std::nullopt;
  }

  const Object* parms_obj = resolve(stream.dict.find("DecodeParms"));
  if (!parms_obj) parms_obj = resolve(stream.dict.find("DP"));

  std::string data = stream.raw;
  for (std::size_t i = 0; i < filters.size(); ++i) {
    const std::string& f = filters[i];
    if (f != "FlateDecode" && f != "Fl") return std::nullopt;
    data = zlib_inflate(data);

    const Object* parms = nullptr;
    if (parms_obj) {
      if (parms_obj->is_dict() && filters.size() == 1)
        parms = parms_obj;
      else if (parms_obj->is_array() && i < parms_obj->array().size())
        parms = resolve(&parms_obj->array()[i]);
    }
    if (parms && parms->is_dict()) {
      auto int_or = [&](const char* key, int dflt) {
        const Object* v = resolve(parms->dict().find(key));
        return v && v->is_number() ? static_cast<int>(v->integer()) : dflt;
      };
      const int predictor = int_or("Predictor", 1);
      if (predictor >= 10) {
        data = apply_png_predictor(data, int_or("Colors", 1), int_or("BitsPerComponent", 8),
                                   int_or("Columns", 1));
      } else if (predictor != 1) {
        return std::nullopt;  // TIFF predictor: not produced by tools we read
      }
    }
  }
  return data;
}

}  // namespace

std::optional<std::string> decode_stream(const Document& doc, const Stream& stream) {
  return decode_impl(stream, [&doc](const Object* o) { return doc.resolve(o); });
}

std::optional<std::string> decode_stream(const Stream& stream) {
  return decode_impl(stream, [](const Object* o) {
    return (o && o->is_ref()) ? nullptr : o;
  });
}

}  // namespace reviewaudit::pdf
