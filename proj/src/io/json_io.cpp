#include "delayrep/io/json_io.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace delayrep::io {

namespace {

using json = nlohmann::json;

// ---------------------------------------------------------------------------------------------
// Canonical text form

std::string number_text(double v) {
    // Integral values come back as integers, which cannot carry the sign of zero.
    if (v == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool is_flat(const json& j) {
    for (const auto& e : j) {
        if (e.is_array() || e.is_object()) return false;
    }
    return true;
}

void emit(const json& j, int indent, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += inner + json(it.key()).dump() + ": ";
                emit(it.value(), indent + 2, out);
            }
            out += "\n" + pad + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            if (is_flat(j)) {
                out += "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) out += ", ";
                    emit(j[i], indent, out);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += inner;
                emit(j[i], indent + 2, out);
            }
            out += "\n" + pad + "]";
            return;
        }
        case json::value_t::number_float:
            out += number_text(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

std::string canonical(const json& j) {
    std::string out;
    emit(j, 0, out);
    out += "\n";
    return out;
}

// ---------------------------------------------------------------------------------------------
// Matrices and kernels

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(row);
    }
    return rows;
}

Matrix matrix_from(const json& j, Index rows, Index cols, const std::string& name) {
    if (j.is_null()) return Matrix::Zero(rows, cols);
    if (!j.is_array()) throw ValidationError(name + ": matrix must be a nested array");
    if (j.empty() && (rows == 0 || cols == 0)) return Matrix::Zero(rows, cols);
    if (static_cast<Index>(j.size()) != rows) {
        throw ValidationError(name + ": expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
    }
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
            throw ValidationError(name + ": row " + std::to_string(i) + " must have " + std::to_string(cols) +
                                  " entries");
        }
        for (Index k = 0; k < cols; ++k) {
            const json& v = row[static_cast<std::size_t>(k)];
            if (!v.is_number()) throw ValidationError(name + ": entries must be numbers");
            m(i, k) = v.get<double>();
        }
    }
    return m;
}

json kernel_json(const PolyKernel& k) {
    json out;
    out["degree"] = k.degree();
    if (k.vars() == 2) out["vars"] = 2;
    json coeffs = json::array();
    for (const auto& c : k.coeffs()) coeffs.push_back(matrix_json(c));
    out["coeffs"] = coeffs;
    return out;
}

PolyKernel kernel_from(const json& j, Index rows, Index cols, double lower, const std::string& name, int vars = 1) {
    if (j.is_null()) return PolyKernel::zero(rows, cols, vars, lower);
    if (!j.is_object() || !j.contains("degree") || !j.contains("coeffs")) {
        throw ValidationError(name + ": kernel must be {\"degree\": d, \"coeffs\": [...]}");
    }
    const int degree = j.at("degree").get<int>();
    const int v = j.value("vars", 1);
    if (v != vars) throw ValidationError(name + ": expected a kernel in " + std::to_string(vars) + " variable(s)");
    if (degree < 0) throw ValidationError(name + ": degree must be non-negative");
    const json& cj = j.at("coeffs");
    const std::size_t expected = vars == 1 ? static_cast<std::size_t>(degree + 1)
                                           : static_cast<std::size_t>((degree + 1) * (degree + 1));
    if (!cj.is_array() || cj.size() != expected) {
        throw ValidationError(name + ": expected " + std::to_string(expected) + " coefficient matrices");
    }
    std::vector<Matrix> coeffs;
    for (std::size_t i = 0; i < expected; ++i) {
        coeffs.push_back(matrix_from(cj[i], rows, cols, name + "[" + std::to_string(i) + "]"));
    }
    return vars == 1 ? PolyKernel::univariate(std::move(coeffs), lower)
                     : PolyKernel::bivariate(degree, std::move(coeffs), lower);
}

const json& member(const json& obj, const std::string& key) {
    static const json null_value;
    if (!obj.is_object()) return null_value;
    const auto it = obj.find(key);
    return it == obj.end() ? null_value : *it;
}

void put_matrix(json& obj, const std::string& key, const Matrix& m) {
    if (m.size() > 0 && !m.isZero(0.0)) obj[key] = matrix_json(m);
}

/// Per-delay matrix lists: written whole when any entry is nonzero.
template <class Item>
void put_list(json& obj, const std::string& key, const std::vector<Item>& items, const std::function<const Matrix&(const Item&)>& get) {
    bool any = false;
    for (const auto& it : items) any = any || (get(it).size() > 0 && !get(it).isZero(0.0));
    if (!any) return;
    json arr = json::array();
    for (const auto& it : items) arr.push_back(matrix_json(get(it)));
    obj[key] = arr;
}

template <class Item>
void put_kernels(json& obj, const std::string& key, const std::vector<Item>& items,
                 const std::function<const PolyKernel&(const Item&)>& get) {
    bool any = false;
    for (const auto& it : items) any = any || !get(it).is_zero();
    if (!any) return;
    json arr = json::array();
    for (const auto& it : items) arr.push_back(kernel_json(get(it)));
    obj[key] = arr;
}

const json& list_entry(const json& obj, const std::string& key, std::size_t i, std::size_t K) {
    static const json null_value;
    const json& arr = member(obj, key);
    if (arr.is_null()) return null_value;
    if (!arr.is_array() || arr.size() != K) {
        throw ValidationError(key + ": expected a list with one entry per delay (" + std::to_string(K) + ")");
    }
    return arr[i];
}

// ---------------------------------------------------------------------------------------------
// Dims and delays

Index dim_of(const json& dims, const char* key) {
    const json& v = member(dims, key);
    if (v.is_null()) return 0;
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ValidationError(std::string("dims.") + key + " must be a non-negative integer");
    }
    return static_cast<Index>(v.get<long long>());
}

std::vector<double> delays_of(const json& root) {
    const json& d = member(root, "delays");
    if (d.is_null()) return {};
    if (!d.is_array()) throw ValidationError("delays must be an array");
    std::vector<double> out;
    for (const auto& v : d) {
        if (!v.is_number()) throw ValidationError("delays must be numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

json dims_json(const Dims& d, bool channels) {
    json out;
    out["n"] = d.n;
    out["m"] = d.m;
    out["p"] = d.p;
    out["q"] = d.q;
    out["r"] = d.r;
    if (channels) {
        out["p_i"] = d.p_i;
        out["n_v"] = d.n_v;
    }
    return out;
}

json delays_json(const std::vector<double>& delays) {
    json arr = json::array();
    for (double d : delays) arr.push_back(d);
    return arr;
}

// ---------------------------------------------------------------------------------------------
// DDE and NDS

struct InstEntry {
    const char* key;
    Matrix DDESpec::*field;
    Index Dims::*rows;
    Index Dims::*cols;
};

const InstEntry kDdeInst[] = {
    {"A0", &DDESpec::A0, &Dims::n, &Dims::n},   {"B1", &DDESpec::B1, &Dims::n, &Dims::m},
    {"B2", &DDESpec::B2, &Dims::n, &Dims::p},   {"C10", &DDESpec::C10, &Dims::q, &Dims::n},
    {"C20", &DDESpec::C20, &Dims::r, &Dims::n}, {"D11", &DDESpec::D11, &Dims::q, &Dims::m},
    {"D12", &DDESpec::D12, &Dims::q, &Dims::p}, {"D21", &DDESpec::D21, &Dims::r, &Dims::m},
    {"D22", &DDESpec::D22, &Dims::r, &Dims::p},
};

struct BlockEntry {
    const char* key;
    const char* kernel_key;
    Matrix DelayBlock::*field;
    PolyKernel DistributedBlock::*kernel;
    Index Dims::*rows;
    Index Dims::*cols;
};

const BlockEntry kDdeBlocks[] = {
    {"Ai", "Adi", &DelayBlock::A, &DistributedBlock::A, &Dims::n, &Dims::n},
    {"B1i", "B1di", &DelayBlock::B1, &DistributedBlock::B1, &Dims::n, &Dims::m},
    {"B2i", "B2di", &DelayBlock::B2, &DistributedBlock::B2, &Dims::n, &Dims::p},
    {"C1i", "C1di", &DelayBlock::C1, &DistributedBlock::C1, &Dims::q, &Dims::n},
    {"C2i", "C2di", &DelayBlock::C2, &DistributedBlock::C2, &Dims::r, &Dims::n},
    {"D11i", "D11di", &DelayBlock::D11, &DistributedBlock::D11, &Dims::q, &Dims::m},
    {"D12i", "D12di", &DelayBlock::D12, &DistributedBlock::D12, &Dims::q, &Dims::p},
    {"D21i", "D21di", &DelayBlock::D21, &DistributedBlock::D21, &Dims::r, &Dims::m},
    {"D22i", "D22di", &DelayBlock::D22, &DistributedBlock::D22, &Dims::r, &Dims::p},
};

struct NeutralEntry {
    const char* key;
    const char* kernel_key;
    Matrix NeutralBlock::*field;
    PolyKernel NeutralKernel::*kernel;
    Index Dims::*rows;
};

const NeutralEntry kNeutral[] = {
    {"Ei", "Edi", &NeutralBlock::E, &NeutralKernel::E, &Dims::n},
    {"E1i", "E1di", &NeutralBlock::E1, &NeutralKernel::E1, &Dims::q},
    {"E2i", "E2di", &NeutralBlock::E2, &NeutralKernel::E2, &Dims::r},
};

DDESpec dde_from(const json& root) {
    const json& dims = member(root, "dims");
    DDESpec d = DDESpec::zeros(dim_of(dims, "n"), dim_of(dims, "m"), dim_of(dims, "p"), dim_of(dims, "q"),
                               dim_of(dims, "r"), delays_of(root));
    const json& mats = member(root, "matrices");
    const json& kers = member(root, "kernels");
    for (const auto& e : kDdeInst) d.*e.field = matrix_from(member(mats, e.key), d.dims.*e.rows, d.dims.*e.cols, e.key);
    const std::size_t K = d.delays.size();
    for (std::size_t i = 0; i < K; ++i) {
        for (const auto& e : kDdeBlocks) {
            const Index rows = d.dims.*e.rows, cols = d.dims.*e.cols;
            d.delayed[i].*e.field = matrix_from(list_entry(mats, e.key, i, K), rows, cols, e.key);
            d.distributed[i].*e.kernel =
                kernel_from(list_entry(kers, e.kernel_key, i, K), rows, cols, -d.delays[i], e.kernel_key);
        }
    }
    return d;
}

void dde_into(const DDESpec& d, json& root) {
    root["dims"] = dims_json(d.dims, false);
    root["delays"] = delays_json(d.delays);
    json mats = json::object();
    json kers = json::object();
    for (const auto& e : kDdeInst) put_matrix(mats, e.key, d.*e.field);
    for (const auto& e : kDdeBlocks) {
        put_list<DelayBlock>(mats, e.key, d.delayed, [&](const DelayBlock& b) -> const Matrix& { return b.*e.field; });
        put_kernels<DistributedBlock>(kers, e.kernel_key, d.distributed,
                                      [&](const DistributedBlock& b) -> const PolyKernel& { return b.*e.kernel; });
    }
    root["matrices"] = mats;
    root["kernels"] = kers;
}

NDSSpec nds_from(const json& root) {
    NDSSpec s;
    s.base = dde_from(root);
    const Dims& dm = s.base.dims;
    const std::size_t K = s.base.delays.size();
    s.neutral.assign(K, {});
    s.neutral_distributed.assign(K, {});
    const json& mats = member(root, "matrices");
    const json& kers = member(root, "kernels");
    for (std::size_t i = 0; i < K; ++i) {
        for (const auto& e : kNeutral) {
            const Index rows = dm.*e.rows;
            s.neutral[i].*e.field = matrix_from(list_entry(mats, e.key, i, K), rows, dm.n, e.key);
            s.neutral_distributed[i].*e.kernel =
                kernel_from(list_entry(kers, e.kernel_key, i, K), rows, dm.n, -s.base.delays[i], e.kernel_key);
        }
    }
    return s;
}

void nds_into(const NDSSpec& s, json& root) {
    dde_into(s.base, root);
    for (const auto& e : kNeutral) {
        put_list<NeutralBlock>(root["matrices"], e.key, s.neutral,
                               [&](const NeutralBlock& b) -> const Matrix& { return b.*e.field; });
        put_kernels<NeutralKernel>(root["kernels"], e.kernel_key, s.neutral_distributed,
                                   [&](const NeutralKernel& b) -> const PolyKernel& { return b.*e.kernel; });
    }
}

// ---------------------------------------------------------------------------------------------
// DDF

struct DdfInstEntry {
    const char* key;
    Matrix DDFSpec::*field;
    Index Dims::*rows;
    Index Dims::*cols;
};

const DdfInstEntry kDdfInst[] = {
    {"A0", &DDFSpec::A0, &Dims::n, &Dims::n},    {"B1", &DDFSpec::B1, &Dims::n, &Dims::m},
    {"B2", &DDFSpec::B2, &Dims::n, &Dims::p},    {"C1", &DDFSpec::C1, &Dims::q, &Dims::n},
    {"C2", &DDFSpec::C2, &Dims::r, &Dims::n},    {"D11", &DDFSpec::D11, &Dims::q, &Dims::m},
    {"D12", &DDFSpec::D12, &Dims::q, &Dims::p},  {"D21", &DDFSpec::D21, &Dims::r, &Dims::m},
    {"D22", &DDFSpec::D22, &Dims::r, &Dims::p},  {"Bv", &DDFSpec::Bv, &Dims::n, &Dims::n_v},
    {"D1v", &DDFSpec::D1v, &Dims::q, &Dims::n_v}, {"D2v", &DDFSpec::D2v, &Dims::r, &Dims::n_v},
};

/// Channel blocks; rows or cols of -1 stand for the channel dim p_i.
struct ChannelEntry {
    const char* key;
    Matrix DelayChannel::*field;
    Index Dims::*rows;  ///< nullptr means p_i
    Index Dims::*cols;  ///< nullptr means p_i
};

const ChannelEntry kChannels[] = {
    {"Cri", &DelayChannel::Cr, nullptr, &Dims::n},    {"Br1i", &DelayChannel::Br1, nullptr, &Dims::m},
    {"Br2i", &DelayChannel::Br2, nullptr, &Dims::p},  {"Drvi", &DelayChannel::Drv, nullptr, &Dims::n_v},
    {"Cvi", &DelayChannel::Cv, &Dims::n_v, nullptr},
};

std::vector<Index> channel_dims(const json& dims, std::size_t K) {
    const json& pi = member(dims, "p_i");
    if (!pi.is_array() || pi.size() != K) throw ValidationError("dims.p_i must list one channel dim per delay");
    std::vector<Index> out;
    for (const auto& v : pi) {
        if (!v.is_number_integer() || v.get<long long>() < 0) throw ValidationError("dims.p_i entries must be non-negative integers");
        out.push_back(static_cast<Index>(v.get<long long>()));
    }
    return out;
}

DDFSpec ddf_from(const json& root) {
    const json& dims = member(root, "dims");
    const auto delays = delays_of(root);
    DDFSpec f = DDFSpec::zeros(dim_of(dims, "n"), dim_of(dims, "m"), dim_of(dims, "p"), dim_of(dims, "q"),
                               dim_of(dims, "r"), delays, channel_dims(dims, delays.size()), dim_of(dims, "n_v"));
    const json& mats = member(root, "matrices");
    const json& kers = member(root, "kernels");
    for (const auto& e : kDdfInst) f.*e.field = matrix_from(member(mats, e.key), f.dims.*e.rows, f.dims.*e.cols, e.key);
    const std::size_t K = delays.size();
    for (std::size_t i = 0; i < K; ++i) {
        const Index pi = f.dims.p_i[i];
        for (const auto& e : kChannels) {
            const Index rows = e.rows ? f.dims.*e.rows : pi;
            const Index cols = e.cols ? f.dims.*e.cols : pi;
            f.channels[i].*e.field = matrix_from(list_entry(mats, e.key, i, K), rows, cols, e.key);
        }
        f.channels[i].Cvd = kernel_from(list_entry(kers, "Cvdi", i, K), f.dims.n_v, pi, -delays[i], "Cvdi");
    }
    const json& prov = member(root, "provenance");
    if (prov.is_array()) {
        for (const auto& p : prov) f.provenance.push_back(p.get<std::string>());
    }
    return f;
}

void ddf_into(const DDFSpec& f, json& root) {
    root["dims"] = dims_json(f.dims, true);
    root["delays"] = delays_json(f.delays);
    json mats = json::object();
    json kers = json::object();
    for (const auto& e : kDdfInst) put_matrix(mats, e.key, f.*e.field);
    for (const auto& e : kChannels) {
        put_list<DelayChannel>(mats, e.key, f.channels, [&](const DelayChannel& c) -> const Matrix& { return c.*e.field; });
    }
    put_kernels<DelayChannel>(kers, "Cvdi", f.channels, [](const DelayChannel& c) -> const PolyKernel& { return c.Cvd; });
    root["matrices"] = mats;
    root["kernels"] = kers;
    if (!f.provenance.empty()) root["provenance"] = f.provenance;
}

// ---------------------------------------------------------------------------------------------
// PIE

struct OperatorEntry {
    const char* key;
    PIOperator PIESpec::*field;
};

const OperatorEntry kOperators[] = {
    {"T", &PIESpec::T},     {"A", &PIESpec::A},     {"B1", &PIESpec::B1},   {"B2", &PIESpec::B2},
    {"C1", &PIESpec::C1},   {"C2", &PIESpec::C2},   {"D11", &PIESpec::D11}, {"D12", &PIESpec::D12},
    {"D21", &PIESpec::D21}, {"D22", &PIESpec::D22}, {"BT1", &PIESpec::BT1}, {"BT2", &PIESpec::BT2},
};

json operator_json(const PIOperator& op) {
    json out;
    out["n_out"] = op.n_out;
    out["n_in"] = op.n_in;
    out["p_out"] = op.p_out;
    out["p_in"] = op.p_in;
    if (op.P.size() > 0) out["P"] = matrix_json(op.P);
    const std::pair<const char*, const PolyKernel*> kernels[] = {
        {"Q1", &op.Q1}, {"Q2", &op.Q2}, {"R0", &op.R0}, {"R1", &op.R1}, {"R2", &op.R2}};
    for (const auto& [key, k] : kernels) {
        if (k->rows() > 0 && k->cols() > 0 && !k->is_zero()) out[key] = kernel_json(*k);
    }
    return out;
}

PIOperator operator_from(const json& j, const std::string& name) {
    if (!j.is_object()) throw ValidationError("operator " + name + " missing");
    auto size = [&](const char* key) {
        const json& v = member(j, key);
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            throw ValidationError(name + "." + key + " must be a non-negative integer");
        }
        return static_cast<Index>(v.get<long long>());
    };
    PIOperator op = PIOperator::zero(size("n_out"), size("n_in"), size("p_out"), size("p_in"));
    op.P = matrix_from(member(j, "P"), op.n_out, op.n_in, name + ".P");
    op.Q1 = kernel_from(member(j, "Q1"), op.n_out, op.p_in, -1.0, name + ".Q1");
    op.Q2 = kernel_from(member(j, "Q2"), op.p_out, op.n_in, -1.0, name + ".Q2");
    op.R0 = kernel_from(member(j, "R0"), op.p_out, op.p_in, -1.0, name + ".R0");
    op.R1 = kernel_from(member(j, "R1"), op.p_out, op.p_in, -1.0, name + ".R1", 2);
    op.R2 = kernel_from(member(j, "R2"), op.p_out, op.p_in, -1.0, name + ".R2", 2);
    return op;
}

PIESpec pie_from(const json& root) {
    const json& dims = member(root, "dims");
    PIESpec pie;
    pie.delays = delays_of(root);
    pie.dims.n = dim_of(dims, "n");
    pie.dims.m = dim_of(dims, "m");
    pie.dims.p = dim_of(dims, "p");
    pie.dims.q = dim_of(dims, "q");
    pie.dims.r = dim_of(dims, "r");
    pie.dims.p_i = channel_dims(dims, pie.delays.size());
    pie.dims.n_v = dim_of(dims, "n_v");
    pie.dims.K = static_cast<Index>(pie.delays.size());
    const json& ops = member(root, "operators");
    for (const auto& e : kOperators) pie.*e.field = operator_from(member(ops, e.key), e.key);
    return pie;
}

void pie_into(const PIESpec& pie, json& root) {
    root["dims"] = dims_json(pie.dims, true);
    root["delays"] = delays_json(pie.delays);
    json ops = json::object();
    for (const auto& e : kOperators) ops[e.key] = operator_json(pie.*e.field);
    root["operators"] = ops;
}

// ---------------------------------------------------------------------------------------------
// Feedback-network section

json sof_json(const SofSection& s) {
    json out;
    out["delays"] = delays_json(s.plant.delays);
    out["A0"] = matrix_json(s.plant.A0);
    out["B1"] = matrix_json(s.plant.B1);
    out["C1"] = matrix_json(s.plant.C1);
    out["D12"] = matrix_json(s.plant.D12);
    out["C2"] = matrix_json(s.plant.C2);
    out["D21"] = matrix_json(s.plant.D21);
    out["F"] = matrix_json(s.F);
    json b2 = json::array(), d22 = json::array();
    for (const auto& m : s.plant.B2) b2.push_back(matrix_json(m));
    for (const auto& m : s.plant.D22) d22.push_back(matrix_json(m));
    out["B2i"] = b2;
    out["D22i"] = d22;
    return out;
}

SofSection sof_from(const json& j, const Dims& d) {
    SofSection s;
    s.plant.delays = delays_of(j);
    s.plant.A0 = matrix_from(member(j, "A0"), d.n, d.n, "sof_plant.A0");
    s.plant.B1 = matrix_from(member(j, "B1"), d.n, d.m, "sof_plant.B1");
    s.plant.C1 = matrix_from(member(j, "C1"), d.q, d.n, "sof_plant.C1");
    s.plant.D12 = matrix_from(member(j, "D12"), d.q, d.p, "sof_plant.D12");
    s.plant.C2 = matrix_from(member(j, "C2"), d.r, d.n, "sof_plant.C2");
    s.plant.D21 = matrix_from(member(j, "D21"), d.r, d.m, "sof_plant.D21");
    s.F = matrix_from(member(j, "F"), d.p, d.r, "sof_plant.F");
    const std::size_t K = s.plant.delays.size();
    for (std::size_t i = 0; i < K; ++i) {
        s.plant.B2.push_back(matrix_from(list_entry(j, "B2i", i, K), d.n, d.p, "sof_plant.B2i"));
        s.plant.D22.push_back(matrix_from(list_entry(j, "D22i", i, K), d.r, d.p, "sof_plant.D22i"));
    }
    s.plant.check();
    return s;
}

}  // namespace

std::string SpecFile::type() const {
    static const char* names[] = {"DDE", "NDS", "DDF", "ODEPDE", "PIE"};
    return names[spec.index()];
}

SpecFile parse_spec(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed spec JSON: ") + e.what());
    }
    if (!root.is_object()) throw ValidationError("spec JSON must be an object");
    const json& type = member(root, "type");
    if (!type.is_string()) throw ValidationError("spec JSON needs a \"type\" string");
    const std::string t = type.get<std::string>();
    SpecFile file;
    try {
        if (t == "DDE") {
            file.spec = dde_from(root);
        } else if (t == "NDS") {
            file.spec = nds_from(root);
        } else if (t == "DDF" || t == "ODEPDE") {
            DDFSpec f = ddf_from(root);
            if (t == "DDF") file.spec = f;
            else file.spec = ODEPDESpec{f};
            const json& sof = member(root, "sof_plant");
            if (!sof.is_null()) file.sof = sof_from(sof, f.dims);
        } else if (t == "PIE") {
            file.spec = pie_from(root);
        } else {
            throw ValidationError("unknown spec type '" + t + "'");
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed spec JSON: ") + e.what());
    }
    return file;
}

std::string dump_spec(const SpecFile& file) {
    json root;
    root["type"] = file.type();
    std::visit(
        [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, DDESpec>) dde_into(s, root);
            else if constexpr (std::is_same_v<S, NDSSpec>) nds_into(s, root);
            else if constexpr (std::is_same_v<S, DDFSpec>) ddf_into(s, root);
            else if constexpr (std::is_same_v<S, ODEPDESpec>) ddf_into(s.body, root);
            else pie_into(s, root);
        },
        file.spec);
    if (file.sof) root["sof_plant"] = sof_json(*file.sof);
    return canonical(root);
}

SpecFile read_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read spec file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

void write_spec(const std::string& path, const SpecFile& file) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write spec file '" + path + "'");
    out << dump_spec(file);
}

}  // namespace delayrep::io
