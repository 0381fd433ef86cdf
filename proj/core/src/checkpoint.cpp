#include "imbtext/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "imbtext/error.hpp"

namespace imbtext {

namespace {

constexpr char kMagic[8] = {'I', 'M', 'B', 'T', 'C', 'K', 'P', '1'};

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class Reader {
public:
    explicit Reader(std::string data) : data_(std::move(data)) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(byte()); }

    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(byte()) << (8 * i);
        return v;
    }

    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(byte()) << (8 * i);
        return v;
    }

    double f64() { return std::bit_cast<double>(u64()); }

    std::string str(std::size_t n) {
        if (pos_ + n > data_.size()) throw ParseError("checkpoint: truncated file");
        std::string s = data_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    bool done() const { return pos_ == data_.size(); }

private:
    unsigned char byte() {
        if (pos_ >= data_.size()) throw ParseError("checkpoint: truncated file");
        return static_cast<unsigned char>(data_[pos_++]);
    }

    std::string data_;
    std::size_t pos_ = 0;
};

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ModelCheckpoint& ckpt) {
    std::string out;
    out.append(kMagic, sizeof(kMagic));
    out.push_back(static_cast<char>(ckpt.prov.task));
    out.push_back(static_cast<char>(ckpt.params.mode == LabelMode::Multiclass ? 0 : 1));
    out.push_back(static_cast<char>(ckpt.params.trunk ? 1 : 0));
    out.push_back(0);
    put_u32(out, static_cast<std::uint32_t>(ckpt.prov.fold));
    put_u32(out, static_cast<std::uint32_t>(ckpt.prov.epoch));
    put_f64(out, ckpt.prov.val_score);
    put_u64(out, ckpt.prov.init_trunk_digest);
    put_u32(out, static_cast<std::uint32_t>(ckpt.params.dim_in()));
    put_u32(out, static_cast<std::uint32_t>(ckpt.params.hidden()));
    put_u32(out, static_cast<std::uint32_t>(ckpt.params.label_count()));
    if (static_cast<int>(ckpt.labels.size()) != ckpt.params.label_count())
        throw ValidationError("checkpoint: label list does not match the head size");
    for (const auto& label : ckpt.labels) {
        put_u32(out, static_cast<std::uint32_t>(label.size()));
        out.append(label);
    }
    if (ckpt.params.trunk) {
        for (double v : ckpt.params.trunk->w.a) put_f64(out, v);
        for (double v : ckpt.params.trunk->b) put_f64(out, v);
    }
    for (double v : ckpt.params.head.w.a) put_f64(out, v);
    for (double v : ckpt.params.head.b) put_f64(out, v);

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot write checkpoint: " + path.string());
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file) throw IoError("failed writing checkpoint: " + path.string());
}

ModelCheckpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open checkpoint: " + path.string());
    std::string data((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());

    Reader r(std::move(data));
    if (r.str(sizeof(kMagic)) != std::string(kMagic, sizeof(kMagic)))
        throw ParseError("checkpoint " + path.string() + ": bad magic");

    ModelCheckpoint ckpt;
    const std::uint8_t task = r.u8();
    if (task > 2) throw ParseError("checkpoint: bad task tag");
    ckpt.prov.task = static_cast<Task>(task);
    const std::uint8_t mode = r.u8();
    if (mode > 1) throw ParseError("checkpoint: bad mode tag");
    ckpt.params.mode = mode == 0 ? LabelMode::Multiclass : LabelMode::Multilabel;
    const bool has_trunk = r.u8() != 0;
    r.u8();  // reserved
    ckpt.prov.fold = static_cast<int>(r.u32());
    ckpt.prov.epoch = static_cast<int>(r.u32());
    ckpt.prov.val_score = r.f64();
    ckpt.prov.init_trunk_digest = r.u64();
    const int dim_in = static_cast<int>(r.u32());
    const int hidden = static_cast<int>(r.u32());
    const int labels = static_cast<int>(r.u32());
    if (dim_in < 1 || labels < 1 || hidden < 0 || (has_trunk && hidden == 0))
        throw ParseError("checkpoint: inconsistent dimensions");
    for (int i = 0; i < labels; ++i) {
        const std::size_t n = r.u32();
        ckpt.labels.push_back(r.str(n));
    }
    if (has_trunk) {
        ParamBlock trunk;
        trunk.w = Mat(dim_in, hidden);
        for (double& v : trunk.w.a) v = r.f64();
        trunk.b.resize(hidden);
        for (double& v : trunk.b) v = r.f64();
        ckpt.params.trunk = std::move(trunk);
        ckpt.params.head.w = Mat(hidden, labels);
    } else {
        ckpt.params.head.w = Mat(dim_in, labels);
    }
    for (double& v : ckpt.params.head.w.a) v = r.f64();
    ckpt.params.head.b.resize(labels);
    for (double& v : ckpt.params.head.b) v = r.f64();
    if (!r.done()) throw ParseError("checkpoint " + path.string() + ": trailing bytes");
    return ckpt;
}

}  // namespace imbtext
