#include "ddecc/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ddecc/error.hpp"

namespace ddecc::nn {

namespace {

constexpr char magic[8] = {'D', 'D', 'E', 'C', 'C', 'K', 'P', 'T'};

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

class Writer {
public:
    template <typename T>
    void put(T v) {
        char buf[sizeof(T)];
        std::memcpy(buf, &v, sizeof(T));
        out_.append(buf, sizeof(T));
    }
    void bytes(std::string_view s) { out_.append(s); }
    std::string& str() { return out_; }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(std::string_view in) : in_(in) {}

    template <typename T>
    T get() {
        need(sizeof(T));
        T v;
        std::memcpy(&v, in_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }
    std::string_view bytes(std::size_t n) {
        need(n);
        auto s = in_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::size_t remaining() const { return in_.size() - pos_; }

private:
    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) throw CorruptFileError("checkpoint truncated");
    }
    std::string_view in_;
    std::size_t pos_ = 0;
};

std::string config_text(const DenoiserModel& model, const Metadata& metadata) {
    Metadata all = metadata;
    const auto& a = model.arch();
    all["arch.backbone"] = std::string(to_string(a.backbone));
    all["arch.embed_dim"] = std::to_string(a.embed_dim);
    all["arch.layers"] = std::to_string(a.layers);
    all["arch.heads"] = std::to_string(a.heads);
    all["arch.hidden"] = std::to_string(a.hidden);
    all["code.n"] = std::to_string(model.n());
    all["code.k"] = std::to_string(model.k());
    std::string text;
    for (const auto& [key, value] : all) {
        if (key.find_first_of("=\n") != std::string::npos || value.find('\n') != std::string::npos)
            throw Error("checkpoint metadata keys/values must not contain '=' or newlines");
        text += key + "=" + value + "\n";
    }
    return text;
}

Metadata parse_config(std::string_view text) {
    Metadata out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) throw CorruptFileError("checkpoint config block malformed");
        auto line = text.substr(pos, eol - pos);
        auto eq = line.find('=');
        if (eq == std::string_view::npos) throw CorruptFileError("checkpoint config line without '='");
        out.emplace(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
        pos = eol + 1;
    }
    return out;
}

std::size_t config_size(const Metadata& cfg, const std::string& key) {
    auto it = cfg.find(key);
    if (it == cfg.end()) throw CorruptFileError("checkpoint config lacks '" + key + "'");
    try {
        return static_cast<std::size_t>(std::stoull(it->second));
    } catch (const std::exception&) {
        throw CorruptFileError("checkpoint config value for '" + key + "' is not an integer");
    }
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string serialize_checkpoint(const DenoiserModel& model, const Metadata& metadata) {
    Writer w;
    w.bytes(std::string_view(magic, sizeof magic));
    w.put<std::uint32_t>(checkpoint_version);
    const auto cfg = config_text(model, metadata);
    w.put<std::uint64_t>(cfg.size());
    w.bytes(cfg);
    w.put<std::uint64_t>(model.parameters().size());
    for (const auto& p : model.parameters()) {
        w.put<std::uint32_t>(static_cast<std::uint32_t>(p.name.size()));
        w.bytes(p.name);
        w.put<std::uint32_t>(static_cast<std::uint32_t>(p.tensor.shape.size()));
        for (auto d : p.tensor.shape) w.put<std::uint64_t>(d);
        for (double v : p.tensor.values) w.put<double>(v);
    }
    w.put<std::uint64_t>(fnv1a64(w.str()));
    return std::move(w.str());
}

void save_checkpoint(const DenoiserModel& model, const std::filesystem::path& path, const Metadata& metadata) {
    const auto bytes = serialize_checkpoint(model, metadata);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("failed writing checkpoint '" + path.string() + "'");
}

namespace {

// Validates magic, checksum and version, and leaves `r` positioned after the config block.
Metadata open_checkpoint(Reader& r) {
    r.bytes(sizeof magic);
    const auto version = r.get<std::uint32_t>();
    if (version != checkpoint_version)
        throw VersionError("checkpoint format version " + std::to_string(version) + " unsupported (expected " +
                           std::to_string(checkpoint_version) + ")");
    const auto cfg_len = r.get<std::uint64_t>();
    return parse_config(r.bytes(cfg_len));
}

std::string_view checked_body(const std::string& bytes) {
    if (bytes.size() < sizeof magic + sizeof(std::uint32_t) + 2 * sizeof(std::uint64_t))
        throw CorruptFileError("checkpoint truncated");
    if (std::memcmp(bytes.data(), magic, sizeof magic) != 0) throw CorruptFileError("not a checkpoint file (bad magic)");
    const std::string_view body(bytes.data(), bytes.size() - sizeof(std::uint64_t));
    std::uint64_t stored = 0;
    std::memcpy(&stored, bytes.data() + body.size(), sizeof stored);
    if (stored != fnv1a64(body)) throw CorruptFileError("checkpoint checksum mismatch");
    return body;
}

Metadata strip_model_keys(const Metadata& cfg) {
    Metadata meta;
    for (const auto& [key, value] : cfg)
        if (key.rfind("arch.", 0) != 0 && key.rfind("code.", 0) != 0) meta.emplace(key, value);
    return meta;
}

}  // namespace

bool is_checkpoint(std::string_view bytes) noexcept {
    return bytes.size() >= sizeof magic && std::memcmp(bytes.data(), magic, sizeof magic) == 0;
}

Metadata checkpoint_metadata(const std::string& bytes) {
    Reader r(checked_body(bytes));
    return strip_model_keys(open_checkpoint(r));
}

LoadedCheckpoint deserialize_checkpoint(const std::string& bytes, const ParityCheckMatrix& h) {
    Reader r(checked_body(bytes));
    Metadata cfg = open_checkpoint(r);

    const std::size_t n = config_size(cfg, "code.n");
    const std::size_t k = config_size(cfg, "code.k");
    if (n != h.n() || k != h.k())
        throw ShapeError("checkpoint trained for a (" + std::to_string(n) + "," + std::to_string(k) +
                         ") code, requested (" + std::to_string(h.n()) + "," + std::to_string(h.k()) + ")");

    ArchConfig arch;
    arch.backbone = parse_backbone(cfg.at("arch.backbone"));
    arch.embed_dim = config_size(cfg, "arch.embed_dim");
    arch.layers = config_size(cfg, "arch.layers");
    arch.heads = config_size(cfg, "arch.heads");
    arch.hidden = config_size(cfg, "arch.hidden");
    DenoiserModel model(h, arch, 0);

    const auto count = r.get<std::uint64_t>();
    if (count != model.parameters().size())
        throw ShapeError("checkpoint holds " + std::to_string(count) + " arrays, model expects " +
                         std::to_string(model.parameters().size()));
    for (auto& p : model.parameters()) {
        const auto name_len = r.get<std::uint32_t>();
        const std::string name(r.bytes(name_len));
        if (name != p.name) throw ShapeError("checkpoint array '" + name + "' where '" + p.name + "' was expected");
        const auto rank = r.get<std::uint32_t>();
        std::vector<std::size_t> shape(rank);
        for (auto& d : shape) d = static_cast<std::size_t>(r.get<std::uint64_t>());
        if (shape != p.tensor.shape) throw ShapeError("checkpoint array '" + name + "' has an unexpected shape");
        for (auto& v : p.tensor.values) v = r.get<double>();
    }
    if (r.remaining() != 0) throw CorruptFileError("trailing bytes after checkpoint arrays");

    return LoadedCheckpoint{std::move(model), strip_model_keys(cfg)};
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path, const ParityCheckMatrix& h) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open checkpoint '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_checkpoint(buf.str(), h);
}

}  // namespace ddecc::nn
