#include "limo/io.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace limo {
namespace io {

namespace fs = std::filesystem;
using nlohmann::json;

void write_file_atomic(const fs::path& path, const std::string& bytes) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw data_error("cannot open for writing: " + tmp.string());
        out.write(bytes.data(), (std::streamsize)bytes.size());
        if (!out) throw data_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw data_error("rename failed for " + path.string() + ": " +
                         ec.message());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

class ByteWriter {
  public:
    void magic(const char* tag) { buf_.append(tag, 4); }
    void u32(uint32_t v) {
        char b[4] = {(char)(v & 0xff), (char)((v >> 8) & 0xff),
                     (char)((v >> 16) & 0xff), (char)((v >> 24) & 0xff)};
        buf_.append(b, 4);
    }
    void u8(uint8_t v) { buf_.push_back((char)v); }
    void f32(float v) {
        static_assert(sizeof(float) == 4);
        uint32_t bits;
        std::memcpy(&bits, &v, 4);
        u32(bits);
    }
    void f32_array(const double* data, size_t n) {
        for (size_t i = 0; i < n; i++) f32((float)data[i]);
    }
    void f32_array(const float* data, size_t n) {
        for (size_t i = 0; i < n; i++) f32(data[i]);
    }
    void raw(const void* data, size_t n) {
        buf_.append((const char*)data, n);
    }
    const std::string& bytes() const { return buf_; }

  private:
    std::string buf_;
};

class ByteReader {
  public:
    explicit ByteReader(const std::string& bytes) : buf_(bytes) {}

    void expect_magic(const char* tag) {
        if (buf_.size() - pos_ < 4 || std::memcmp(buf_.data() + pos_, tag, 4))
            throw data_error(std::string("bad magic, expected ") + tag);
        pos_ += 4;
    }
    uint32_t u32() {
        need(4);
        const unsigned char* p = (const unsigned char*)buf_.data() + pos_;
        pos_ += 4;
        return (uint32_t)p[0] | ((uint32_t)p[1] << 8) |
               ((uint32_t)p[2] << 16) | ((uint32_t)p[3] << 24);
    }
    uint8_t u8() {
        need(1);
        return (uint8_t)buf_[pos_++];
    }
    float f32() {
        uint32_t bits = u32();
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }
    void f32_array(double* dst, size_t n) {
        for (size_t i = 0; i < n; i++) dst[i] = (double)f32();
    }
    void f32_array(float* dst, size_t n) {
        for (size_t i = 0; i < n; i++) dst[i] = f32();
    }
    void raw(void* dst, size_t n) {
        need(n);
        std::memcpy(dst, buf_.data() + pos_, n);
        pos_ += n;
    }
    bool at_end() const { return pos_ == buf_.size(); }
    size_t remaining() const { return buf_.size() - pos_; }

  private:
    void need(size_t n) {
        if (buf_.size() - pos_ < n) throw data_error("truncated binary file");
    }
    const std::string& buf_;
    size_t pos_ = 0;
};

json parse_json_file(const fs::path& path) {
    json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded())
        throw data_error("invalid JSON in " + path.string());
    return j;
}

}  // namespace

MotionSequence load_motion_json(const fs::path& path) {
    json j = parse_json_file(path);
    MotionSequence m;
    try {
        m.fps = j.at("fps").get<double>();
        const auto& frames = j.at("frames");
        m.frames.reserve(frames.size());
        for (const auto& fr : frames) {
            std::vector<Vec3> row;
            row.reserve(fr.size());
            for (const auto& p : fr)
                row.push_back({p.at(0).get<double>(), p.at(1).get<double>(),
                               p.at(2).get<double>()});
            m.frames.push_back(std::move(row));
        }
    } catch (const json::exception& e) {
        throw data_error("malformed motion file " + path.string() + ": " +
                         e.what());
    }
    if (m.frames.empty()) throw data_error("motion has no frames");
    m.joint_count = m.frames[0].size();
    for (const auto& fr : m.frames) {
        if (fr.size() != m.joint_count)
            throw data_error("inconsistent joint count across frames");
        for (const auto& p : fr)
            if (!p.finite())
                throw data_error("non-finite coordinate in " + path.string());
    }
    return m;
}

void save_motion_json(const fs::path& path, const MotionSequence& motion,
                      const std::vector<std::string>& joint_names,
                      const std::vector<int>& parents) {
    json j;
    j["fps"] = motion.fps;
    j["joint_names"] = joint_names;
    j["parents"] = parents;
    json frames = json::array();
    for (const auto& fr : motion.frames) {
        json row = json::array();
        for (const auto& p : fr) row.push_back({p.x, p.y, p.z});
        frames.push_back(std::move(row));
    }
    j["frames"] = std::move(frames);
    write_file_atomic(path, j.dump());
}

Skeleton load_skeleton_json(const fs::path& path) {
    json j = parse_json_file(path);
    Skeleton sk;
    try {
        sk.joint_names = j.at("joint_names").get<std::vector<std::string>>();
        sk.parents = j.at("parents").get<std::vector<int>>();
        for (const auto& o : j.at("rest_offsets"))
            sk.rest_offsets.push_back({o.at(0).get<double>(),
                                       o.at(1).get<double>(),
                                       o.at(2).get<double>()});
        const auto& bf = j.at("body_frame");
        sk.pelvis = bf.at("pelvis").get<int>();
        sk.left_hip = bf.at("left_hip").get<int>();
        sk.right_hip = bf.at("right_hip").get<int>();
        sk.spine_ref = bf.at("spine").get<int>();
        for (const auto& f : j.at("feature_joints")) {
            FeatureJoint fj;
            fj.name = f.at("name").get<std::string>();
            fj.kind = joint_kind_from_name(f.at("kind").get<std::string>());
            fj.a = f.value("a", -1);
            fj.b = f.value("b", -1);
            fj.c = f.value("c", -1);
            sk.feature_joints.push_back(fj);
        }
    } catch (const json::exception& e) {
        throw data_error("malformed skeleton file " + path.string() + ": " +
                         e.what());
    }
    sk.validate_and_finish();
    return sk;
}

void save_skeleton_json(const fs::path& path, const Skeleton& sk) {
    json j;
    j["joint_names"] = sk.joint_names;
    j["parents"] = sk.parents;
    json offs = json::array();
    for (const auto& o : sk.rest_offsets) offs.push_back({o.x, o.y, o.z});
    j["rest_offsets"] = std::move(offs);
    j["body_frame"] = {{"pelvis", sk.pelvis},
                       {"left_hip", sk.left_hip},
                       {"right_hip", sk.right_hip},
                       {"spine", sk.spine_ref}};
    json fjs = json::array();
    for (const auto& fj : sk.feature_joints) {
        json f;
        f["name"] = fj.name;
        f["kind"] = joint_kind_name(fj.kind);
        f["dof"] = fj.dof;
        if (fj.a >= 0) f["a"] = fj.a;
        if (fj.b >= 0) f["b"] = fj.b;
        if (fj.c >= 0) f["c"] = fj.c;
        fjs.push_back(std::move(f));
    }
    j["feature_joints"] = std::move(fjs);
    write_file_atomic(path, j.dump(2));
}

std::string format_double(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

void save_features_csv(const fs::path& path, const FeatureSequence& fs) {
    std::ostringstream out;
    const auto& names = feature_dim_names();
    for (int c = 0; c < kFeatureDim; c++)
        out << names[c] << (c + 1 < kFeatureDim ? "," : "\n");
    for (size_t t = 0; t < fs.frame_count(); t++) {
        const double* row = fs.rows.row(t);
        for (int c = 0; c < kFeatureDim; c++)
            out << format_double(row[c]) << (c + 1 < kFeatureDim ? "," : "\n");
    }
    write_file_atomic(path, out.str());
}

FeatureSequence load_features_csv(const fs::path& path) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line)) throw data_error("empty CSV: " + path.string());
    std::vector<std::array<double, kFeatureDim>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<double, kFeatureDim> row{};
        std::istringstream ls(line);
        std::string cell;
        for (int c = 0; c < kFeatureDim; c++) {
            if (!std::getline(ls, cell, ','))
                throw data_error("short CSV row in " + path.string());
            row[c] = std::stod(cell);
        }
        rows.push_back(row);
    }
    if (rows.empty()) throw data_error("CSV has no data rows");
    FeatureSequence fs;
    fs.rows = MatD(rows.size(), kFeatureDim);
    for (size_t t = 0; t < rows.size(); t++)
        std::copy(rows[t].begin(), rows[t].end(), fs.rows.row(t));
    return fs;
}

void save_features_binary(const fs::path& path, const FeatureSequence& fs) {
    ByteWriter w;
    w.magic("LIFE");
    w.u32((uint32_t)fs.frame_count());
    w.f32_array(fs.rows.data.data(), fs.rows.data.size());
    write_file_atomic(path, w.bytes());
}

FeatureSequence load_features_binary(const fs::path& path) {
    std::string bytes = read_file(path);
    ByteReader r(bytes);
    r.expect_magic("LIFE");
    uint32_t rows = r.u32();
    if (rows == 0) throw data_error("feature file has zero rows");
    FeatureSequence fs;
    fs.rows = MatD(rows, kFeatureDim);
    r.f32_array(fs.rows.data.data(), fs.rows.data.size());
    return fs;
}

void save_motion_image(const fs::path& path, const mimg::MotionImage& img) {
    ByteWriter w;
    w.magic("LIMI");
    w.u32((uint32_t)img.valid_frames);
    w.f32_array(img.pixels.data(), img.pixels.size());
    write_file_atomic(path, w.bytes());
}

mimg::MotionImage load_motion_image(const fs::path& path) {
    std::string bytes = read_file(path);
    ByteReader r(bytes);
    r.expect_magic("LIMI");
    mimg::MotionImage img;
    img.valid_frames = (int)r.u32();
    img.pixels.resize((size_t)img.height * img.width);
    r.f32_array(img.pixels.data(), img.pixels.size());
    return img;
}

void save_encoder_params(const fs::path& path, const enc::EncoderParams& p) {
    ByteWriter w;
    w.magic("LIEP");
    w.u32(1);  // version
    w.u32(p.vocab_size);
    w.u32((uint32_t)p.dim);
    w.f32_array(p.patch_weight.data.data(), p.patch_weight.data.size());
    w.f32_array(p.patch_bias.data(), p.patch_bias.size());
    w.f32_array(p.positional.data.data(), p.positional.data.size());
    w.f32_array(p.token_table.data.data(), p.token_table.data.size());
    w.f32((float)p.alpha);
    w.f32_array(p.mlm_weight.data.data(), p.mlm_weight.data.size());
    w.f32((float)p.tau());
    w.u32((uint32_t)p.parts.init_seed);
    for (int k = 0; k < kFeatureJoints; k++) {
        w.f32_array(p.parts.weights[k].data(), p.parts.weights[k].size());
        w.f32_array(p.parts.bias[k].data(), p.parts.bias[k].size());
    }
    for (int c = 0; c < 3; c++) w.f32((float)p.stats.mean[c]);
    for (int c = 0; c < 3; c++) w.f32((float)p.stats.std[c]);
    write_file_atomic(path, w.bytes());
}

enc::EncoderParams load_encoder_params(const fs::path& path) {
    std::string bytes = read_file(path);
    ByteReader r(bytes);
    r.expect_magic("LIEP");
    uint32_t version = r.u32();
    if (version != 1) throw data_error("unsupported checkpoint version");
    enc::EncoderParams p;
    p.vocab_size = r.u32();
    p.dim = (int)r.u32();
    if (p.dim != enc::kEmbedDim)
        throw data_error("unsupported embedding dimension");
    p.patch_weight = MatD(enc::kEmbedDim, enc::kPatchDim);
    r.f32_array(p.patch_weight.data.data(), p.patch_weight.data.size());
    p.patch_bias.resize(enc::kEmbedDim);
    r.f32_array(p.patch_bias.data(), p.patch_bias.size());
    p.positional = MatD(enc::kPatchCount, enc::kEmbedDim);
    r.f32_array(p.positional.data.data(), p.positional.data.size());
    p.token_table = MatD(p.vocab_size, enc::kEmbedDim);
    r.f32_array(p.token_table.data.data(), p.token_table.data.size());
    p.alpha = (double)r.f32();
    p.mlm_weight = MatD(enc::kEmbedDim, p.vocab_size);
    r.f32_array(p.mlm_weight.data.data(), p.mlm_weight.data.size());
    p.log_tau = std::log((double)r.f32());
    p.parts.layout = mimg::base_layout();
    p.parts.init_seed = r.u32();
    for (int k = 0; k < kFeatureJoints; k++) {
        p.parts.weights[k].resize((size_t)p.parts.layout.band_height *
                                  p.parts.layout.dof[k]);
        r.f32_array(p.parts.weights[k].data(), p.parts.weights[k].size());
        p.parts.bias[k].resize(p.parts.layout.band_height);
        r.f32_array(p.parts.bias[k].data(), p.parts.bias[k].size());
    }
    for (int c = 0; c < 3; c++) p.stats.mean[c] = (double)r.f32();
    for (int c = 0; c < 3; c++) p.stats.std[c] = (double)r.f32();
    return p;
}

void save_vocabulary_json(const fs::path& path, const enc::Vocabulary& v) {
    json j;
    j["tokens"] = v.id_to_token;
    j["pad"] = enc::Vocabulary::kPad;
    j["mask"] = enc::Vocabulary::kMask;
    j["unk"] = enc::Vocabulary::kUnk;
    write_file_atomic(path, j.dump(2));
}

enc::Vocabulary load_vocabulary_json(const fs::path& path) {
    json j = parse_json_file(path);
    enc::Vocabulary v;
    try {
        v.id_to_token = j.at("tokens").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw data_error("malformed vocabulary " + path.string() + ": " +
                         e.what());
    }
    if (v.id_to_token.size() < 3)
        throw data_error("vocabulary missing special tokens");
    for (size_t i = 0; i < v.id_to_token.size(); i++)
        v.token_to_id[v.id_to_token[i]] = (int)i;
    return v;
}

void write_pgm(const fs::path& path, const uint8_t* pixels, int width,
               int height) {
    std::ostringstream out;
    out << "P5\n" << width << " " << height << "\n255\n";
    out.write((const char*)pixels, (std::streamsize)width * height);
    write_file_atomic(path, out.str());
}

namespace {

uint32_t crc32_of(const std::string& s) {
    return (uint32_t)crc32(0L, (const Bytef*)s.data(), (uInt)s.size());
}

void png_chunk(std::string& out, const char* type, const std::string& body) {
    uint32_t len = (uint32_t)body.size();
    char hdr[4] = {(char)(len >> 24), (char)(len >> 16), (char)(len >> 8),
                   (char)len};
    out.append(hdr, 4);
    std::string tb(type, 4);
    tb += body;
    out += tb;
    uint32_t crc = crc32_of(tb);
    char cb[4] = {(char)(crc >> 24), (char)(crc >> 16), (char)(crc >> 8),
                  (char)crc};
    out.append(cb, 4);
}

}  // namespace

void write_png_gray(const fs::path& path, const uint8_t* pixels, int width,
                    int height) {
    // Minimal 8-bit grayscale PNG: one IDAT, filter 0 per scanline.
    std::string raw;
    raw.reserve((size_t)height * (width + 1));
    for (int r = 0; r < height; r++) {
        raw.push_back('\0');
        raw.append((const char*)pixels + (size_t)r * width, width);
    }
    uLongf comp_len = compressBound((uLong)raw.size());
    std::string comp(comp_len, '\0');
    if (compress((Bytef*)comp.data(), &comp_len, (const Bytef*)raw.data(),
                 (uLong)raw.size()) != Z_OK)
        throw internal_error("deflate failed for " + path.string());
    comp.resize(comp_len);

    std::string out("\x89PNG\r\n\x1a\n", 8);
    std::string ihdr;
    auto be32 = [&](std::string& s, uint32_t v) {
        s.push_back((char)(v >> 24));
        s.push_back((char)(v >> 16));
        s.push_back((char)(v >> 8));
        s.push_back((char)v);
    };
    be32(ihdr, (uint32_t)width);
    be32(ihdr, (uint32_t)height);
    ihdr.push_back(8);   // bit depth
    ihdr.push_back(0);   // grayscale
    ihdr.push_back(0);   // deflate
    ihdr.push_back(0);   // filter method
    ihdr.push_back(0);   // no interlace
    png_chunk(out, "IHDR", ihdr);
    png_chunk(out, "IDAT", comp);
    png_chunk(out, "IEND", "");
    write_file_atomic(path, out);
}

std::vector<uint8_t> minmax_to_u8(const std::vector<double>& values) {
    double lo = values.empty() ? 0.0 : values[0], hi = lo;
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::vector<uint8_t> out(values.size(), 0);
    double range = hi - lo;
    if (range <= 0.0) return out;
    for (size_t i = 0; i < values.size(); i++)
        out[i] = (uint8_t)std::lround(255.0 * (values[i] - lo) / range);
    return out;
}

void write_csv(const fs::path& path,
               const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream out;
    for (const auto& row : rows) {
        for (size_t c = 0; c < row.size(); c++)
            out << row[c] << (c + 1 < row.size() ? "," : "");
        out << "\n";
    }
    write_file_atomic(path, out.str());
}

}  // namespace io
}  // namespace limo
