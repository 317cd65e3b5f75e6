#include <fstream>

#include "json.hpp"
#include "nlrlda/classifier.hpp"

namespace nlrlda {

namespace {

using nlohmann::json;

json vec_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Eigen::VectorXd vec_from_json(const json& arr) {
    Eigen::VectorXd v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
    return v;
}

}  // namespace

void save_model(const TrainedModel& model, const std::string& path) {
    json j;
    j["format"] = "nlrlda-model";
    j["version"] = 1;
    j["p"] = model.dim();
    j["n0"] = model.n0;
    j["n1"] = model.n1;
    j["tau_hat"] = model.tau_hat;
    j["degenerate_fallback"] = model.degenerate_fallback;
    if (model.degenerate_fallback)
        j["gamma_star"] = nullptr;
    else
        j["gamma_star"] = model.gamma_star;
    j["m0"] = vec_to_json(model.m0);
    j["m1"] = vec_to_json(model.m1);
    j["eigenvalues"] = vec_to_json(model.eig->eigenvalues);
    json evec = json::array();  // row-major
    for (Eigen::Index r = 0; r < model.eig->U.rows(); ++r)
        for (Eigen::Index c = 0; c < model.eig->U.cols(); ++c) evec.push_back(model.eig->U(r, c));
    j["eigenvectors_rowmajor"] = std::move(evec);
    json curve = json::array();
    for (const RiskPoint& pt : model.risk_curve) {
        json e;
        e["gamma"] = pt.gamma;
        e["degenerate"] = pt.degenerate;
        if (!pt.degenerate) {
            e["eps_hat"] = pt.eps_hat;
            e["eps0_hat"] = pt.eps0_hat;
            e["eps1_hat"] = pt.eps1_hat;
        }
        curve.push_back(std::move(e));
    }
    j["risk_curve"] = std::move(curve);

    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) throw io_error("write failed for '" + path + "'");
}

TrainedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw io_error("'" + path + "': " + e.what());
    }
    if (!j.contains("format") || j["format"] != "nlrlda-model")
        throw io_error("'" + path + "' is not a model file");

    TrainedModel model;
    model.n0 = j.at("n0").get<Eigen::Index>();
    model.n1 = j.at("n1").get<Eigen::Index>();
    model.tau_hat = j.at("tau_hat").get<double>();
    model.degenerate_fallback = j.at("degenerate_fallback").get<bool>();
    model.gamma_star = model.degenerate_fallback ? std::numeric_limits<double>::quiet_NaN()
                                                 : j.at("gamma_star").get<double>();
    model.m0 = vec_from_json(j.at("m0"));
    model.m1 = vec_from_json(j.at("m1"));
    const Eigen::Index p = j.at("p").get<Eigen::Index>();
    if (model.m0.size() != p || model.m1.size() != p)
        throw io_error("'" + path + "': mean length does not match p");

    auto eig = std::make_shared<SymEig>();
    eig->eigenvalues = vec_from_json(j.at("eigenvalues"));
    const auto& evec = j.at("eigenvectors_rowmajor");
    if (eig->eigenvalues.size() != p || static_cast<Eigen::Index>(evec.size()) != p * p)
        throw io_error("'" + path + "': eigendecomposition size mismatch");
    eig->U.resize(p, p);
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < p; ++r)
        for (Eigen::Index c = 0; c < p; ++c) eig->U(r, c) = evec[k++].get<double>();
    model.eig = std::move(eig);

    for (const auto& e : j.at("risk_curve")) {
        RiskPoint pt;
        pt.gamma = e.at("gamma").get<double>();
        pt.degenerate = e.at("degenerate").get<bool>();
        if (!pt.degenerate) {
            pt.eps_hat = e.at("eps_hat").get<double>();
            pt.eps0_hat = e.at("eps0_hat").get<double>();
            pt.eps1_hat = e.at("eps1_hat").get<double>();
        }
        model.risk_curve.push_back(pt);
    }
    return model;
}

}  // namespace nlrlda
