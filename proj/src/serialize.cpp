#include "pcia/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pcia {

using nlohmann::json;

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("matrix: expected an array");
  const Index rows = static_cast<Index>(j.size());
  if (rows == 0) return CMatrix(0, 0);
  const Index cols = static_cast<Index>(j.at(0).size());
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const json& row = j.at(r);
    if (static_cast<Index>(row.size()) != cols)
      throw std::invalid_argument("matrix: ragged rows");
    for (Index c = 0; c < cols; ++c) {
      const json& z = row.at(c);
      if (!z.is_array() || z.size() != 2)
        throw std::invalid_argument("matrix: entries must be [re, im]");
      m(r, c) = Complex(z.at(0).get<double>(), z.at(1).get<double>());
    }
  }
  return m;
}

json instance_to_json(const FreedomConstraintInstance& inst) {
  return json{{"k", inst.K}, {"v_t", inst.v_t}, {"v_r", inst.v_r},
              {"c", inst.c}};
}

FreedomConstraintInstance instance_from_json(const json& j) {
  FreedomConstraintInstance inst;
  inst.K = j.at("k").get<int>();
  inst.v_t = j.at("v_t").get<std::vector<long long>>();
  inst.v_r = j.at("v_r").get<std::vector<long long>>();
  inst.c = j.at("c").get<std::vector<std::vector<long long>>>();
  validate_instance(inst);
  return inst;
}

json network_to_json(const NetworkInstance& net) {
  const Topology& topo = net.topology;
  const ChannelRealization& ch = net.channels;
  json out{{"k", topo.K}, {"nt", topo.Nt}, {"nr", topo.Nr},
           {"power", ch.power}};
  json links = json::array();
  for (int m = 0; m < topo.K; ++m)
    for (int n = 0; n < topo.K; ++n) {
      links.push_back({{"m", m},
                       {"n", n},
                       {"connected", topo.connected(m, n)},
                       {"h", matrix_to_json(ch.H(m, n))},
                       {"tx_null_rank", topo.tx(m, n).rank()},
                       {"rx_null_rank", topo.rx(m, n).rank()},
                       {"tx_null", matrix_to_json(topo.tx(m, n).basis())},
                       {"rx_null", matrix_to_json(topo.rx(m, n).basis())}});
    }
  out["links"] = std::move(links);
  if (net.scene) {
    out["scene"] = {{"area_km", net.scene->area_km}, {"tx_x", net.scene->tx_x},
                    {"tx_y", net.scene->tx_y},       {"rx_x", net.scene->rx_x},
                    {"rx_y", net.scene->rx_y},       {"dist", net.scene->dist},
                    {"theta", net.scene->theta},
                    {"degenerate", net.scene->degenerate}};
  }
  if (net.layout) {
    json e2 = json::object();
    for (const auto& [offset, set] : net.layout->e2)
      e2[std::to_string(offset)] = set;
    out["layout"] = {{"e1", net.layout->e1}, {"e2", std::move(e2)}};
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace pcia
