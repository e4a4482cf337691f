#include "core/json_io.hpp"

namespace qss {

using nlohmann::json;

json state_to_json(const DensityMatrix& rho) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < 4; ++i) {
    json re_row = json::array(), im_row = json::array();
    for (int j = 0; j < 4; ++j) {
      re_row.push_back(rho.matrix()(i, j).real());
      im_row.push_back(rho.matrix()(i, j).imag());
    }
    re.push_back(re_row);
    im.push_back(im_row);
  }
  return json{{"dim", 4}, {"re", re}, {"im", im}};
}

DensityMatrix state_from_json(const json& j) {
  try {
    require(j.at("dim").get<int>() == 4, "state dim must be 4");
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    require(re.size() == 4 && im.size() == 4, "state matrices must be 4x4");
    Mat4 m;
    for (int r = 0; r < 4; ++r) {
      require(re[r].size() == 4 && im[r].size() == 4, "state matrices must be 4x4");
      for (int c = 0; c < 4; ++c)
        m(r, c) = cplx(re[r][c].get<double>(), im[r][c].get<double>());
    }
    return DensityMatrix(m);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad state json: ") + e.what());
  }
}

json behavior_to_json(const Behavior& b) {
  json p = json::array();
  for (int z = 0; z < 2; ++z) {
    json px = json::array();
    for (int x = 0; x < 4; ++x) {
      json py = json::array();
      for (int y = 0; y < 4; ++y) {
        json pa = json::array();
        for (int a = 0; a < b.outcome_count(); ++a) pa.push_back(b.p[z][x][y][a]);
        py.push_back(pa);
      }
      px.push_back(py);
    }
    p.push_back(px);
  }
  return json{{"task", task_name(b.task)}, {"p", p}};
}

Behavior behavior_from_json(const json& j) {
  try {
    Behavior b;
    b.task = task_from_name(j.at("task").get<std::string>());
    const int n = b.outcome_count();
    const auto& p = j.at("p");
    require(p.size() == 2, "behavior p must have 2 z-slices");
    for (int z = 0; z < 2; ++z) {
      require(p[z].size() == 4, "behavior p must have 4 x-slices");
      for (int x = 0; x < 4; ++x) {
        require(p[z][x].size() == 4, "behavior p must have 4 y-slices");
        for (int y = 0; y < 4; ++y) {
          require(static_cast<int>(p[z][x][y].size()) == n,
                  "behavior outcome count does not match the task");
          for (int a = 0; a < n; ++a) b.p[z][x][y][a] = p[z][x][y][a].get<double>();
        }
      }
    }
    validate_behavior(b);
    return b;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad behavior json: ") + e.what());
  }
}

json scores_to_json(const Scores& s) {
  if (s.task == Task::Deterministic)
    return json{{"task", task_name(s.task)},
                {"S", s.total},
                {"S_z", {s.per_z[0], s.per_z[1]}}};
  return json{{"task", task_name(s.task)},
              {"R", s.total},
              {"R_scrt", s.secret},
              {"R_ctrl", s.control},
              {"R_scrt_z", {s.secret_z[0], s.secret_z[1]}},
              {"R_ctrl_z", {s.control_z[0], s.control_z[1]}}};
}

}  // namespace qss
