#include "stokrig/serialize.hpp"

#include <json.hpp>

namespace stokrig {

namespace {

using json = nlohmann::ordered_json;

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
  Eigen::VectorXd v(a.size());
  Eigen::Index i = 0;
  for (const auto& x : a) v(i++) = x.get<double>();
  return v;
}

std::string family_name(PolynomialFamily f) {
  return f == PolynomialFamily::LegendreUniform ? "legendre" : "hermite";
}

PolynomialFamily family_from_name(const std::string& s) {
  if (s == "legendre") return PolynomialFamily::LegendreUniform;
  if (s == "hermite") return PolynomialFamily::HermiteGaussian;
  throw ConfigError("unknown polynomial family: " + s);
}

std::string trend_kind_name(TrendModel::Kind k) {
  switch (k) {
    case TrendModel::Kind::Constant: return "constant";
    case TrendModel::Kind::FullPce: return "full-pce";
    case TrendModel::Kind::LarPce: return "lar-pce";
  }
  return "constant";
}

}  // namespace

std::string sk_model_to_json(const SkModel& model) {
  json j;
  j["format"] = "stokrig-sk-model";
  j["version"] = 1;

  const TrendModel& trend = model.trend();
  json jt;
  jt["kind"] = trend_kind_name(trend.kind);
  jt["dimension"] = trend.basis.dimension;
  if (trend.kind != TrendModel::Kind::Constant) {
    json fams = json::array();
    for (auto f : trend.basis.families) fams.push_back(family_name(f));
    jt["families"] = fams;
    json idx = json::array();
    for (const auto& mi : trend.basis.indices) idx.push_back(mi.alpha);
    jt["indices"] = idx;
    jt["max_degree"] = trend.basis.max_degree;
    jt["q_norm"] = trend.basis.q_norm;
    jt["scaling_lo"] = vec_to_json(trend.scaling.lo);
    jt["scaling_hi"] = vec_to_json(trend.scaling.hi);
  }
  j["trend"] = jt;

  j["beta"] = vec_to_json(model.beta());
  j["theta"] = vec_to_json(model.params().theta);
  j["sigma2"] = model.params().sigma2;
  j["sigma_eps"] = vec_to_json(model.sigma_eps());

  const ExperimentalDesign& ed = model.ed();
  json je;
  json pts = json::array();
  for (Eigen::Index i = 0; i < ed.size(); ++i) {
    json row = json::array();
    for (Eigen::Index d = 0; d < ed.dimension(); ++d) row.push_back(ed.points(i, d));
    pts.push_back(row);
  }
  je["points"] = pts;
  je["replications"] = ed.replications;
  je["sample_means"] = vec_to_json(ed.sample_means);
  je["sample_variances"] = vec_to_json(ed.sample_variances);
  je["variances_supplied"] = ed.variances_supplied;
  j["ed"] = je;

  return j.dump(2);
}

SkModel sk_model_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model parse error: ") + e.what());
  }
  if (j.value("format", "") != "stokrig-sk-model") {
    throw ConfigError("not a stokrig SK model document");
  }

  const json& je = j.at("ed");
  const auto& pts = je.at("points");
  Eigen::Index k = static_cast<Eigen::Index>(pts.size());
  Eigen::Index m = k > 0 ? static_cast<Eigen::Index>(pts[0].size()) : 0;
  ExperimentalDesign ed;
  ed.points.resize(k, m);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index d = 0; d < m; ++d) ed.points(i, d) = pts[i][d].get<double>();
  }
  ed.replications = je.at("replications").get<std::vector<int>>();
  ed.sample_means = vec_from_json(je.at("sample_means"));
  ed.sample_variances = vec_from_json(je.at("sample_variances"));
  ed.variances_supplied = je.at("variances_supplied").get<bool>();
  ed.validate();

  const json& jt = j.at("trend");
  std::string kind = jt.at("kind").get<std::string>();
  TrendModel trend;
  if (kind == "constant") {
    trend = TrendModel::constant(jt.at("dimension").get<int>());
  } else {
    PceBasis basis;
    basis.dimension = jt.at("dimension").get<int>();
    basis.max_degree = jt.at("max_degree").get<int>();
    basis.q_norm = jt.at("q_norm").get<double>();
    for (const auto& f : jt.at("families")) {
      basis.families.push_back(family_from_name(f.get<std::string>()));
    }
    for (const auto& idx : jt.at("indices")) {
      basis.indices.push_back(MultiIndex{idx.get<std::vector<int>>()});
    }
    InputScaling scaling =
        InputScaling::box(vec_from_json(jt.at("scaling_lo")), vec_from_json(jt.at("scaling_hi")));
    trend = kind == "full-pce" ? TrendModel::full_pce(std::move(basis), std::move(scaling))
                               : TrendModel::lar_pce(std::move(basis), std::move(scaling));
  }

  CorrelationParams params;
  params.theta = vec_from_json(j.at("theta"));
  params.sigma2 = j.at("sigma2").get<double>();
  Eigen::VectorXd sigma_eps = vec_from_json(j.at("sigma_eps"));

  return SkModel(std::move(trend), std::move(ed), std::move(params), std::move(sigma_eps));
}

}  // namespace stokrig
