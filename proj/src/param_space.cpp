#include "dawin/param_space.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dawin/error.hpp"
#include "dawin/rng.hpp"

namespace dawin {

namespace {

constexpr char kMagic[5] = {'D', 'W', 'I', 'N', '1'};

std::uint64_t to_le(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    else return __builtin_bswap64(v);
}

std::uint32_t to_le32(std::uint32_t v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    else return __builtin_bswap32(v);
}

void check_lambda(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw Error(ErrorCode::Domain, "interpolation coefficient outside [0,1]: " + std::to_string(lambda));
    }
}

nlohmann::json arch_to_json(const MlpArchitecture& a) {
    return {{"input_dim", a.input_dim},
            {"hidden_widths", a.hidden_widths},
            {"class_count", a.class_count},
            {"activation", to_string(a.activation)},
            {"layer_widths", a.widths()}};
}

MlpArchitecture arch_from_json(const nlohmann::json& j) {
    MlpArchitecture a;
    a.input_dim = j.at("input_dim").get<std::size_t>();
    a.hidden_widths = j.at("hidden_widths").get<std::vector<std::size_t>>();
    a.class_count = j.at("class_count").get<std::size_t>();
    a.activation = activation_from_string(j.at("activation").get<std::string>());
    return a;
}

}  // namespace

ParamVector::ParamVector(Eigen::VectorXd values, std::string layout_id)
    : values_(std::move(values)), layout_id_(std::move(layout_id)) {
    if (!values_.allFinite()) throw Error(ErrorCode::Domain, "parameter vector has non-finite entries");
}

void require_compatible(const ParamVector& a, const ParamVector& b) {
    if (!a.compatible_with(b)) {
        throw Error(ErrorCode::IncompatibleModels,
                    "layout '" + a.layout_id() + "' (" + std::to_string(a.size()) + ") vs '" + b.layout_id() +
                        "' (" + std::to_string(b.size()) + ")");
    }
}

ParamVector interpolate_pair(const ParamVector& a, const ParamVector& b, double lambda) {
    require_compatible(a, b);
    check_lambda(lambda);
    Eigen::VectorXd out(a.size());
    interpolate_into(a.values(), b.values(), lambda, out);
    return ParamVector(std::move(out), a.layout_id());
}

void interpolate_into(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double lambda, Eigen::VectorXd& out) {
    if (a.size() != b.size()) throw Error(ErrorCode::IncompatibleModels, "parameter length mismatch");
    out.resize(a.size());
    out.noalias() = (1.0 - lambda) * a + lambda * b;
}

TaskVector make_task_vector(const ParamVector& theta_j, const ParamVector& theta_0) {
    require_compatible(theta_j, theta_0);
    return TaskVector{ParamVector(theta_j.values() - theta_0.values(), theta_0.layout_id()), theta_0.layout_id()};
}

void combine_task_vectors_into(const Eigen::VectorXd& theta_0, double lambda_0, std::span<const double> weights,
                               std::span<const TaskVector> taus, Eigen::VectorXd& out) {
    if (weights.size() != taus.size()) {
        throw Error(ErrorCode::InvalidArgument, "weights and task vectors differ in length");
    }
    out = theta_0;
    for (std::size_t j = 0; j < taus.size(); ++j) {
        if (!(weights[j] >= 0.0)) throw Error(ErrorCode::Domain, "negative task weight");
        if (taus[j].delta.size() != theta_0.size()) {
            throw Error(ErrorCode::IncompatibleModels, "task vector length differs from base model");
        }
        if (weights[j] != 0.0) out.noalias() += (lambda_0 * weights[j]) * taus[j].delta.values();
    }
}

ParamVector combine_task_vectors(const ParamVector& theta_0, double lambda_0, std::span<const double> weights,
                                 std::span<const TaskVector> taus) {
    for (const auto& tau : taus) {
        if (tau.base_layout != theta_0.layout_id() || tau.delta.size() != theta_0.size()) {
            throw Error(ErrorCode::IncompatibleModels, "task vector base layout differs from theta_0");
        }
    }
    Eigen::VectorXd out;
    combine_task_vectors_into(theta_0.values(), lambda_0, weights, taus, out);
    return ParamVector(std::move(out), theta_0.layout_id());
}

std::string Checkpoint::id() const {
    std::string bytes = arch.layout_id();
    const auto& v = payload.values();
    bytes.append(reinterpret_cast<const char*>(v.data()), static_cast<std::size_t>(v.size()) * sizeof(double));
    std::ostringstream os;
    os << std::hex << fnv1a64(bytes);
    return os.str();
}

Checkpoint make_checkpoint(MlpArchitecture arch, Eigen::VectorXd payload, CheckpointMeta meta) {
    arch.validate();
    if (static_cast<std::size_t>(payload.size()) != arch.parameter_count()) {
        throw Error(ErrorCode::HeaderInconsistency, "payload length " + std::to_string(payload.size()) +
                                                        " does not match architecture (" +
                                                        std::to_string(arch.parameter_count()) + ")");
    }
    std::string layout = arch.layout_id();
    return Checkpoint{std::move(arch), ParamVector(std::move(payload), std::move(layout)), std::move(meta)};
}

std::vector<char> encode_checkpoint(const Checkpoint& c) {
    nlohmann::json meta = {{"seed", c.meta.seed},
                           {"dataset_id", c.meta.dataset_id},
                           {"epochs", c.meta.epochs},
                           {"final_loss", c.meta.final_loss},
                           {"role", c.meta.role}};
    meta["parent_id"] = c.meta.parent_id ? nlohmann::json(*c.meta.parent_id) : nlohmann::json(nullptr);
    nlohmann::json header = {{"format", "dawin-checkpoint"},
                             {"arch", arch_to_json(c.arch)},
                             {"layout_id", c.payload.layout_id()},
                             {"payload_length", c.payload.size()},
                             {"meta", meta}};
    const std::string text = header.dump();
    std::vector<char> out;
    out.reserve(sizeof kMagic + 4 + text.size() + static_cast<std::size_t>(c.payload.size()) * 8);
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    const std::uint32_t len = to_le32(static_cast<std::uint32_t>(text.size()));
    const char* lp = reinterpret_cast<const char*>(&len);
    out.insert(out.end(), lp, lp + 4);
    out.insert(out.end(), text.begin(), text.end());
    for (double v : c.payload.values()) {
        const std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(v));
        const char* bp = reinterpret_cast<const char*>(&bits);
        out.insert(out.end(), bp, bp + 8);
    }
    return out;
}

Checkpoint decode_checkpoint(std::span<const char> bytes) {
    if (bytes.size() < sizeof kMagic + 4 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
        throw Error(ErrorCode::Format, "missing DWIN1 magic");
    }
    std::uint32_t len = 0;
    std::memcpy(&len, bytes.data() + sizeof kMagic, 4);
    len = to_le32(len);
    const std::size_t header_start = sizeof kMagic + 4;
    if (bytes.size() < header_start + len) throw Error(ErrorCode::Format, "truncated checkpoint header");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(bytes.begin() + header_start, bytes.begin() + header_start + len);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Format, std::string("malformed checkpoint header: ") + e.what());
    }
    MlpArchitecture arch;
    CheckpointMeta meta;
    std::size_t declared = 0;
    try {
        arch = arch_from_json(header.at("arch"));
        declared = header.at("payload_length").get<std::size_t>();
        const auto& m = header.at("meta");
        meta.seed = m.at("seed").get<std::uint64_t>();
        meta.dataset_id = m.at("dataset_id").get<std::string>();
        meta.epochs = m.at("epochs").get<std::size_t>();
        meta.final_loss = m.at("final_loss").get<double>();
        meta.role = m.value("role", std::string{});
        if (m.contains("parent_id") && !m.at("parent_id").is_null()) meta.parent_id = m.at("parent_id").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Format, std::string("malformed checkpoint header: ") + e.what());
    }
    arch.validate();
    const std::size_t available = bytes.size() - header_start - len;
    if (available != declared * 8) {
        throw Error(ErrorCode::LengthMismatch, "header declares " + std::to_string(declared) + " values but file holds " +
                                                   std::to_string(available) + " payload bytes");
    }
    if (declared != arch.parameter_count()) {
        throw Error(ErrorCode::HeaderInconsistency, "architecture " + arch.layout_id() + " needs " +
                                                        std::to_string(arch.parameter_count()) + " values, payload has " +
                                                        std::to_string(declared));
    }
    Eigen::VectorXd values(static_cast<Eigen::Index>(declared));
    const char* p = bytes.data() + header_start + len;
    for (std::size_t i = 0; i < declared; ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, p + 8 * i, 8);
        values[static_cast<Eigen::Index>(i)] = std::bit_cast<double>(to_le(bits));
    }
    return make_checkpoint(std::move(arch), std::move(values), std::move(meta));
}

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path) {
    const auto bytes = encode_checkpoint(c);
    write_file_atomic(path, bytes);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) { return decode_checkpoint(read_file(path)); }

void write_file_atomic(const std::filesystem::path& path, std::span<const char> bytes) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::Io, "cannot open '" + tmp.string() + "' for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw Error(ErrorCode::Io, "write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::Io, "rename to '" + path.string() + "' failed: " + ec.message());
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    write_file_atomic(path, std::span<const char>(text.data(), text.size()));
}

std::vector<char> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read '" + path.string() + "'");
    return std::vector<char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace dawin
