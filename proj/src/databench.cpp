#include "dawin/databench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dawin/error.hpp"
#include "dawin/param_space.hpp"
#include "dawin/rng.hpp"

namespace dawin {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

const char* kind_name(ShiftSpec::Kind k) {
    switch (k) {
        case ShiftSpec::Kind::Identity: return "identity";
        case ShiftSpec::Kind::Rotation: return "rotation";
        case ShiftSpec::Kind::Noise: return "noise";
        case ShiftSpec::Kind::Scaling: return "scaling";
    }
    return "identity";
}

ShiftSpec::Kind kind_from_name(const std::string& s) {
    if (s == "identity") return ShiftSpec::Kind::Identity;
    if (s == "rotation") return ShiftSpec::Kind::Rotation;
    if (s == "noise") return ShiftSpec::Kind::Noise;
    if (s == "scaling") return ShiftSpec::Kind::Scaling;
    throw Error(ErrorCode::Format, "unknown shift kind '" + s + "'");
}

Eigen::MatrixXd draw_means(Rng& rng, std::size_t classes, std::size_t dim, double radius) {
    Eigen::MatrixXd means(static_cast<Eigen::Index>(classes), static_cast<Eigen::Index>(dim));
    for (Eigen::Index c = 0; c < means.rows(); ++c) {
        for (Eigen::Index k = 0; k < means.cols(); ++k) means(c, k) = rng.normal();
        means.row(c) *= radius / means.row(c).norm();
    }
    return means;
}

// Exactly balanced labels (counts differ by at most one), shuffled.
LabeledData draw_clusters(Rng& rng, const Eigen::MatrixXd& means, std::size_t n) {
    const auto classes = static_cast<std::size_t>(means.rows());
    LabeledData out;
    out.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.labels[i] = static_cast<int>(i % classes);
    rng.shuffle(out.labels);
    out.features.resize(static_cast<Eigen::Index>(n), means.cols());
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        for (Eigen::Index k = 0; k < means.cols(); ++k) {
            out.features(row, k) = means(out.labels[i], k) + rng.normal();
        }
    }
    return out;
}

void apply_shift(const ShiftSpec& shift, LabeledData& data, Rng& rng) {
    switch (shift.kind) {
        case ShiftSpec::Kind::Identity: break;
        case ShiftSpec::Kind::Rotation: rotate_pairs(data.features, shift.angle_deg * kDegToRad); break;
        case ShiftSpec::Kind::Noise:
            for (Eigen::Index i = 0; i < data.features.rows(); ++i) {
                for (Eigen::Index k = 0; k < data.features.cols(); ++k) data.features(i, k) += shift.sigma * rng.normal();
            }
            break;
        case ShiftSpec::Kind::Scaling:
            for (Eigen::Index k = 0; k < data.features.cols(); ++k) {
                data.features.col(k) *= shift.scales[static_cast<std::size_t>(k)];
            }
            break;
    }
}

Domain make_domain(std::string name, LabeledData data, ShiftSpec shift) {
    return Domain{std::move(name), std::move(data), std::move(shift)};
}

}  // namespace

std::string ShiftSpec::name() const {
    char buf[64];
    switch (kind) {
        case Kind::Identity: return "identity";
        case Kind::Rotation: std::snprintf(buf, sizeof buf, "rot%g", angle_deg); return buf;
        case Kind::Noise: std::snprintf(buf, sizeof buf, "noise%g", sigma); return buf;
        case Kind::Scaling: std::snprintf(buf, sizeof buf, "scale%g-%g", scale_lo, scale_hi); return buf;
    }
    return "identity";
}

nlohmann::json ShiftSpec::to_json() const {
    nlohmann::json j = {{"kind", kind_name(kind)}};
    switch (kind) {
        case Kind::Identity: break;
        case Kind::Rotation: j["angle_deg"] = angle_deg; break;
        case Kind::Noise: j["sigma"] = sigma; break;
        case Kind::Scaling:
            j["scale_lo"] = scale_lo;
            j["scale_hi"] = scale_hi;
            j["scales"] = scales;
            break;
    }
    return j;
}

ShiftSpec ShiftSpec::from_json(const nlohmann::json& j) {
    ShiftSpec s;
    s.kind = kind_from_name(j.at("kind").get<std::string>());
    s.angle_deg = j.value("angle_deg", 0.0);
    s.sigma = j.value("sigma", 0.0);
    s.scale_lo = j.value("scale_lo", 1.0);
    s.scale_hi = j.value("scale_hi", 1.0);
    s.scales = j.value("scales", std::vector<double>{});
    return s;
}

void rotate_pairs(Eigen::MatrixXd& features, double angle_rad) {
    const double c = std::cos(angle_rad);
    const double s = std::sin(angle_rad);
    for (Eigen::Index k = 0; k + 1 < features.cols(); k += 2) {
        const Eigen::VectorXd u = features.col(k);
        const Eigen::VectorXd v = features.col(k + 1);
        features.col(k) = c * u - s * v;
        features.col(k + 1) = s * u + c * v;
    }
}

void BenchmarkSpec::validate() const {
    if (class_count < 2) throw Error(ErrorCode::InvalidArgument, "benchmark needs at least 2 classes");
    if (dim < 1) throw Error(ErrorCode::InvalidArgument, "benchmark dimension must be positive");
    if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "cluster radius must be positive");
    if (n_id_train == 0 || n_id_val == 0 || n_test == 0 || n_pretrain == 0) {
        throw Error(ErrorCode::InvalidArgument, "domain sample counts must be positive");
    }
    if (n_test > 0 && ood_shifts.empty()) {
        throw Error(ErrorCode::InvalidArgument, "OOD test domains requested but the shift list is empty");
    }
    for (const auto& s : ood_shifts) {
        if (s.kind == ShiftSpec::Kind::Identity) throw Error(ErrorCode::InvalidArgument, "OOD shift must not be identity");
        if (s.kind == ShiftSpec::Kind::Scaling && !(s.scale_lo > 0.0 && s.scale_hi >= s.scale_lo)) {
            throw Error(ErrorCode::InvalidArgument, "scaling range must be positive and ordered");
        }
    }
    for (std::size_t i = 0; i < ood_shifts.size(); ++i) {
        for (std::size_t j = i + 1; j < ood_shifts.size(); ++j) {
            if (ood_shifts[i].name() == ood_shifts[j].name()) {
                throw Error(ErrorCode::InvalidArgument, "duplicate OOD shift " + ood_shifts[i].name());
            }
        }
    }
    if (mtl_tasks > 0 && (n_task_train == 0 || n_task_test == 0)) {
        throw Error(ErrorCode::InvalidArgument, "task sample counts must be positive");
    }
}

nlohmann::json BenchmarkSpec::to_json() const {
    nlohmann::json shifts = nlohmann::json::array();
    for (const auto& s : ood_shifts) shifts.push_back(s.to_json());
    return {{"class_count", class_count},
            {"dim", dim},
            {"radius", radius},
            {"n_pretrain", n_pretrain},
            {"n_id_train", n_id_train},
            {"n_id_val", n_id_val},
            {"n_test", n_test},
            {"pretrain_max_rotation_deg", pretrain_max_rotation_deg},
            {"mtl_rotation_span_deg", mtl_rotation_span_deg},
            {"ood_shifts", shifts},
            {"mtl_tasks", mtl_tasks},
            {"n_task_train", n_task_train},
            {"n_task_test", n_task_test}};
}

BenchmarkSpec BenchmarkSpec::from_json(const nlohmann::json& j) {
    BenchmarkSpec s;
    try {
        s.class_count = j.value("class_count", s.class_count);
        s.dim = j.value("dim", s.dim);
        s.radius = j.value("radius", s.radius);
        s.n_pretrain = j.value("n_pretrain", s.n_pretrain);
        s.n_id_train = j.value("n_id_train", s.n_id_train);
        s.n_id_val = j.value("n_id_val", s.n_id_val);
        s.n_test = j.value("n_test", s.n_test);
        s.pretrain_max_rotation_deg = j.value("pretrain_max_rotation_deg", s.pretrain_max_rotation_deg);
        s.mtl_rotation_span_deg = j.value("mtl_rotation_span_deg", s.mtl_rotation_span_deg);
        if (j.contains("ood_shifts")) {
            s.ood_shifts.clear();
            for (const auto& e : j.at("ood_shifts")) {
                auto shift = ShiftSpec::from_json(e);
                shift.scales.clear();
                s.ood_shifts.push_back(std::move(shift));
            }
        }
        s.mtl_tasks = j.value("mtl_tasks", s.mtl_tasks);
        s.n_task_train = j.value("n_task_train", s.n_task_train);
        s.n_task_test = j.value("n_task_test", s.n_task_test);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Format, std::string("malformed benchmark spec: ") + e.what());
    }
    return s;
}

std::vector<const Domain*> BenchmarkSuite::eval_domains() const {
    std::vector<const Domain*> out{&id_test};
    for (const auto& d : ood_tests) out.push_back(&d);
    return out;
}

BenchmarkSuite generate(std::uint64_t seed, const BenchmarkSpec& spec) {
    spec.validate();
    BenchmarkSuite suite;
    suite.seed = seed;
    suite.spec = spec;

    Rng mean_rng = Rng::substream(seed, "suite/means");
    const Eigen::MatrixXd means = draw_means(mean_rng, spec.class_count, spec.dim, spec.radius);

    {
        Rng rng = Rng::substream(seed, "suite/pretrain");
        LabeledData data = draw_clusters(rng, means, spec.n_pretrain);
        Rng angle_rng = Rng::substream(seed, "suite/pretrain/angles");
        for (Eigen::Index i = 0; i < data.features.rows(); ++i) {
            Eigen::MatrixXd row = data.features.row(i);
            rotate_pairs(row, angle_rng.uniform(0.0, spec.pretrain_max_rotation_deg) * kDegToRad);
            data.features.row(i) = row;
        }
        ShiftSpec mix = ShiftSpec::rotation(spec.pretrain_max_rotation_deg);
        suite.pretrain_mix = make_domain("pretrain_mix", std::move(data), mix);
    }

    const auto canonical = [&](const std::string& stream, std::size_t n) {
        Rng rng = Rng::substream(seed, stream);
        return draw_clusters(rng, means, n);
    };
    suite.id_train = make_domain("id_train", canonical("suite/id_train", spec.n_id_train), ShiftSpec::identity());
    suite.id_val = make_domain("id_val", canonical("suite/id_val", spec.n_id_val), ShiftSpec::identity());
    suite.id_test = make_domain("id_test", canonical("suite/id_test", spec.n_test), ShiftSpec::identity());

    for (std::size_t s = 0; s < spec.ood_shifts.size(); ++s) {
        ShiftSpec shift = spec.ood_shifts[s];
        const std::string base = "suite/ood/" + std::to_string(s);
        if (shift.kind == ShiftSpec::Kind::Scaling) {
            Rng scale_rng = Rng::substream(seed, base + "/scales");
            shift.scales.resize(spec.dim);
            const double lo = std::log(shift.scale_lo);
            const double hi = std::log(shift.scale_hi);
            for (auto& f : shift.scales) f = std::exp(scale_rng.uniform(lo, hi));
        }
        LabeledData data = canonical(base, spec.n_test);
        Rng shift_rng = Rng::substream(seed, base + "/shift");
        apply_shift(shift, data, shift_rng);
        suite.ood_tests.push_back(make_domain("ood_" + shift.name(), std::move(data), shift));
    }

    // Tasks share the canonical class means (one label space, one head) and
    // differ by rotation; the last task sits outside the pretraining range.
    for (std::size_t t = 0; t < spec.mtl_tasks; ++t) {
        const std::string base = "suite/mtl/" + std::to_string(t);
        const double angle = spec.mtl_rotation_span_deg * static_cast<double>(t) / static_cast<double>(spec.mtl_tasks);
        const ShiftSpec shift = ShiftSpec::rotation(angle);
        Rng train_rng = Rng::substream(seed, base + "/train");
        Rng test_rng = Rng::substream(seed, base + "/test");
        LabeledData train_data = draw_clusters(train_rng, means, spec.n_task_train);
        LabeledData test_data = draw_clusters(test_rng, means, spec.n_task_test);
        rotate_pairs(train_data.features, angle * kDegToRad);
        rotate_pairs(test_data.features, angle * kDegToRad);
        const std::string name = "task" + std::to_string(t);
        suite.mtl_tasks.push_back(MtlTask{make_domain(name + "_train", std::move(train_data), shift),
                                          make_domain(name + "_test", std::move(test_data), shift), angle});
    }
    return suite;
}

std::string domain_to_csv(const LabeledData& data) {
    std::string out = "label";
    for (Eigen::Index k = 0; k < data.dim(); ++k) out += ",f" + std::to_string(k);
    out += '\n';
    char buf[40];
    for (Eigen::Index i = 0; i < data.size(); ++i) {
        if (data.has_labels()) out += std::to_string(data.labels[static_cast<std::size_t>(i)]);
        for (Eigen::Index k = 0; k < data.dim(); ++k) {
            std::snprintf(buf, sizeof buf, ",%.17g", data.features(i, k));
            out += buf;
        }
        out += '\n';
    }
    return out;
}

LabeledData domain_from_csv(const std::string& text, std::optional<std::size_t> class_count) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.empty()) throw Error(ErrorCode::EmptyDataset, "domain file is empty");
    if (line.rfind("label", 0) != 0) throw Error(ErrorCode::Format, "missing `label,f0,...` header");
    const auto dim = static_cast<Eigen::Index>(std::count(line.begin(), line.end(), ','));
    if (dim < 1) throw Error(ErrorCode::Format, "header lists no feature columns");

    std::vector<double> values;
    std::vector<int> labels;
    std::size_t row = 0;
    int labeled_state = -1;  // unknown until the first row
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::string where = "row " + std::to_string(row);
        std::vector<std::string_view> fields;
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (static_cast<Eigen::Index>(fields.size()) != dim + 1) {
            throw Error(ErrorCode::Format, where + ": expected " + std::to_string(dim) + " features, got " +
                                               std::to_string(fields.size() - 1));
        }
        const bool labeled = !fields[0].empty();
        if (labeled_state == -1) labeled_state = labeled ? 1 : 0;
        if (labeled != (labeled_state == 1)) throw Error(ErrorCode::Format, where + ": mixes labeled and unlabeled rows");
        if (labeled) {
            int y = 0;
            auto [p, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), y);
            if (ec != std::errc{} || p != fields[0].data() + fields[0].size()) {
                throw Error(ErrorCode::Format, where + ": malformed label");
            }
            if (y < 0 || (class_count && static_cast<std::size_t>(y) >= *class_count)) {
                throw Error(ErrorCode::Format, where + ": label " + std::to_string(y) + " out of range");
            }
            labels.push_back(y);
        }
        for (std::size_t k = 1; k < fields.size(); ++k) {
            double v = 0.0;
            auto [p, ec] = std::from_chars(fields[k].data(), fields[k].data() + fields[k].size(), v);
            if (ec != std::errc{} || p != fields[k].data() + fields[k].size() || !std::isfinite(v)) {
                throw Error(ErrorCode::Format, where + ": malformed feature " + std::to_string(k - 1));
            }
            values.push_back(v);
        }
        ++row;
    }
    if (row == 0) throw Error(ErrorCode::EmptyDataset, "domain file has no samples");
    LabeledData data;
    data.features.resize(static_cast<Eigen::Index>(row), dim);
    for (std::size_t i = 0; i < row; ++i) {
        for (Eigen::Index k = 0; k < dim; ++k) {
            data.features(static_cast<Eigen::Index>(i), k) = values[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(k)];
        }
    }
    data.labels = std::move(labels);
    return data;
}

void save_domain(const LabeledData& data, const std::filesystem::path& path) {
    write_text_atomic(path, domain_to_csv(data));
}

LabeledData load_domain(const std::filesystem::path& path, std::optional<std::size_t> class_count) {
    const auto bytes = read_file(path);
    if (bytes.empty()) throw Error(ErrorCode::EmptyDataset, "domain file '" + path.string() + "' is empty");
    return domain_from_csv(std::string(bytes.begin(), bytes.end()), class_count);
}

namespace {

nlohmann::json domain_entry(const Domain& d, const std::filesystem::path& dir) {
    const std::string file = d.name + ".csv";
    save_domain(d.data, dir / file);
    return {{"name", d.name}, {"file", file}, {"shift", d.shift.to_json()}, {"size", d.data.size()}};
}

Domain domain_from_entry(const nlohmann::json& e, const std::filesystem::path& dir, std::size_t classes) {
    return Domain{e.at("name").get<std::string>(), load_domain(dir / e.at("file").get<std::string>(), classes),
                  ShiftSpec::from_json(e.at("shift"))};
}

}  // namespace

void save_suite(const BenchmarkSuite& suite, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    nlohmann::json manifest;
    manifest["format"] = "dawin-suite";
    manifest["seed"] = suite.seed;
    manifest["spec"] = suite.spec.to_json();
    manifest["pretrain_mix"] = domain_entry(suite.pretrain_mix, dir);
    manifest["id_train"] = domain_entry(suite.id_train, dir);
    manifest["id_val"] = domain_entry(suite.id_val, dir);
    manifest["id_test"] = domain_entry(suite.id_test, dir);
    manifest["ood_tests"] = nlohmann::json::array();
    for (const auto& d : suite.ood_tests) manifest["ood_tests"].push_back(domain_entry(d, dir));
    manifest["mtl_tasks"] = nlohmann::json::array();
    for (const auto& t : suite.mtl_tasks) {
        manifest["mtl_tasks"].push_back(
            {{"train", domain_entry(t.train, dir)}, {"test", domain_entry(t.test, dir)}, {"rotation_deg", t.rotation_deg}});
    }
    write_text_atomic(dir / "suite.json", manifest.dump(2) + "\n");
}

BenchmarkSuite load_suite(const std::filesystem::path& dir) {
    const auto bytes = read_file(dir / "suite.json");
    nlohmann::json m;
    try {
        m = nlohmann::json::parse(bytes.begin(), bytes.end());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Format, std::string("malformed suite manifest: ") + e.what());
    }
    BenchmarkSuite suite;
    try {
        suite.seed = m.at("seed").get<std::uint64_t>();
        suite.spec = BenchmarkSpec::from_json(m.at("spec"));
        const std::size_t c = suite.spec.class_count;
        suite.pretrain_mix = domain_from_entry(m.at("pretrain_mix"), dir, c);
        suite.id_train = domain_from_entry(m.at("id_train"), dir, c);
        suite.id_val = domain_from_entry(m.at("id_val"), dir, c);
        suite.id_test = domain_from_entry(m.at("id_test"), dir, c);
        for (const auto& e : m.at("ood_tests")) {
            suite.ood_tests.push_back(domain_from_entry(e, dir, c));
        }
        suite.spec.ood_shifts.clear();
        for (const auto& d : suite.ood_tests) suite.spec.ood_shifts.push_back(d.shift);
        for (const auto& e : m.at("mtl_tasks")) {
            suite.mtl_tasks.push_back(MtlTask{domain_from_entry(e.at("train"), dir, c),
                                              domain_from_entry(e.at("test"), dir, c),
                                              e.at("rotation_deg").get<double>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Format, std::string("malformed suite manifest: ") + e.what());
    }
    return suite;
}

}  // namespace dawin
