#ifndef COOLLAB_JSON_IO_HPP
#define COOLLAB_JSON_IO_HPP

#include <fstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "coollab/channels.hpp"
#include "coollab/matrix.hpp"
#include "coollab/noise_models.hpp"
#include "coollab/spectral.hpp"

namespace coollab {

using json = nlohmann::json;

// Matrix wire format: {"dim": d, "re": [[...]], "im": [[...]]}, row-major.
// Non-square matrices use the same re/im arrays with "dim" omitted.

inline json matrix_to_json(const ComplexMatrix& m, bool with_dim = true) {
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json rrow = json::array(), irow = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rrow.push_back(m(i, j).real());
            irow.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rrow));
        im.push_back(std::move(irow));
    }
    json out{{"re", std::move(re)}, {"im", std::move(im)}};
    if (with_dim && m.rows() == m.cols()) out["dim"] = m.rows();
    return out;
}

inline ComplexMatrix matrix_from_json(const json& j) {
    if (!j.contains("re") || !j.contains("im"))
        throw InvalidInput("matrix JSON: missing re/im arrays");
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (!re.is_array() || !im.is_array() || re.size() != im.size() ||
        re.empty())
        throw InvalidInput("matrix JSON: malformed re/im arrays");
    const auto rows = static_cast<Eigen::Index>(re.size());
    const auto cols = static_cast<Eigen::Index>(re.at(0).size());
    if (j.contains("dim") &&
        (j.at("dim").get<Eigen::Index>() != rows ||
         j.at("dim").get<Eigen::Index>() != cols))
        throw InvalidInput("matrix JSON: dim does not match array shape");
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& rrow = re.at(static_cast<std::size_t>(i));
        const auto& irow = im.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(rrow.size()) != cols ||
            static_cast<Eigen::Index>(irow.size()) != cols)
            throw InvalidInput("matrix JSON: ragged rows");
        for (Eigen::Index k = 0; k < cols; ++k)
            m(i, k) = Complex(rrow.at(static_cast<std::size_t>(k)).get<double>(),
                              irow.at(static_cast<std::size_t>(k)).get<double>());
    }
    return m;
}

inline json density_to_json(const DensityMatrix& rho) {
    return matrix_to_json(rho.mat());
}

inline DensityMatrix density_from_json(const json& j) {
    return DensityMatrix(matrix_from_json(j));
}

// Channel wire format:
// {"dim": d, "kind": "random_unitary" | "kraus",
//  "ops": [{"weight": w (random_unitary only), "re": ..., "im": ...}, ...]}

inline json channel_to_json(const RandomUnitaryChannel& ch) {
    json ops = json::array();
    for (const auto& r : ch.realizations()) {
        json op = matrix_to_json(r.k.k, false);
        op["weight"] = r.weight;
        ops.push_back(std::move(op));
    }
    return json{{"dim", ch.dim()},
                {"kind", "random_unitary"},
                {"ops", std::move(ops)}};
}

inline json channel_to_json(const KrausChannel& ch) {
    json ops = json::array();
    for (const auto& e : ch.ops()) ops.push_back(matrix_to_json(e, false));
    return json{{"dim", ch.dim_in()}, {"kind", "kraus"}, {"ops", std::move(ops)}};
}

using AnyChannel = std::variant<RandomUnitaryChannel, KrausChannel>;

inline AnyChannel channel_from_json(const json& j) {
    const std::string kind = j.value("kind", "kraus");
    if (!j.contains("ops") || !j.at("ops").is_array() || j.at("ops").empty())
        throw InvalidInput("channel JSON: missing ops array");
    if (kind == "random_unitary") {
        std::vector<RandomUnitaryChannel::Realization> reals;
        Eigen::Index dim = 0;
        for (const auto& op : j.at("ops")) {
            if (!op.contains("weight"))
                throw InvalidInput(
                    "channel JSON: random_unitary op missing weight");
            ComplexMatrix k = matrix_from_json(op);
            dim = k.rows();
            reals.push_back(
                {op.at("weight").get<double>(), UnitaryRealization(std::move(k))});
        }
        if (j.contains("dim") && j.at("dim").get<Eigen::Index>() != dim)
            throw InvalidInput("channel JSON: dim does not match operators");
        return RandomUnitaryChannel(dim, std::move(reals));
    }
    if (kind == "kraus") {
        std::vector<ComplexMatrix> ops;
        for (const auto& op : j.at("ops")) ops.push_back(matrix_from_json(op));
        return KrausChannel(std::move(ops));
    }
    throw InvalidInput("channel JSON: unknown kind '" + kind + "'");
}

inline json certificate_to_json(const ChannelCertificate& cert) {
    json out{{"cptp_defect", cert.cptp_defect},
             {"unital_defect", cert.unital_defect},
             {"is_mixed_unitary", cert.is_mixed_unitary},
             {"row_sums", cert.row_sums},
             {"cooling_impossible", cert.cooling_impossible}};
    if (cert.witness)
        out["witness"] = json{{"before", cert.witness->before.probs},
                              {"after", cert.witness->after.probs}};
    return out;
}

inline json ensemble_to_json(const NoiseEnsemble& ens) {
    return json{{"thetas", ens.thetas}, {"lambdas", ens.lambdas}};
}

inline NoiseEnsemble ensemble_from_json(const json& j) {
    return NoiseEnsemble(j.at("thetas").get<std::vector<double>>(),
                         j.at("lambdas").get<std::vector<double>>());
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidInput("parse error in " + path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& path,
                            const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InvalidInput("cannot open file for writing: " + path);
    out << content;
    if (!out)
        throw InvalidInput("write failed: " + path);
}

}  // namespace coollab

#endif
