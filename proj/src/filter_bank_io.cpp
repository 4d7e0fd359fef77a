#include "ocular/filter_bank_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <json.hpp>

namespace ocular {
namespace {

void put_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFFu);
    out.write(bytes, 8);
}

double get_f64(const std::vector<unsigned char>& blob, std::size_t index) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(blob[index * 8 + i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

}  // namespace

void save_filter_bank(const FilterBank& bank, const std::filesystem::path& json_path) {
    const std::size_t mn = static_cast<std::size_t>(bank.rows) * bank.cols;
    std::filesystem::path blob_path = json_path;
    blob_path.replace_extension(".bin");

    nlohmann::json j;
    j["format"] = "ocular-filter-bank";
    j["version"] = 1;
    j["domain"] = domain_name(bank.domain);
    j["rows"] = bank.rows;
    j["cols"] = bank.cols;
    j["params"] = {{"a", bank.params.a},
                   {"b", bank.params.b},
                   {"c", bank.params.c},
                   {"sigma2", bank.params.sigma2},
                   {"epsilon", bank.params.epsilon}};
    j["blob"] = blob_path.filename().string();
    j["byte_order"] = "little";
    j["value_type"] = "float64";
    j["classes"] = nlohmann::json::array();

    std::ofstream blob(blob_path, std::ios::binary);
    if (!blob) throw InputError("cannot write " + blob_path.string());
    std::size_t offset = 0;
    for (const auto& c : bank.classes) {
        if (c.h.size() != mn || c.mean.size() != mn || c.var.size() != mn)
            throw InvalidArgument("save_filter_bank: class coefficients do not match the bank shape");
        j["classes"].push_back({{"state", state_name(c.state)},
                                {"training_count", c.training_count},
                                {"h_offset", offset},
                                {"mean_offset", offset + 2 * mn},
                                {"var_offset", offset + 4 * mn}});
        for (const auto& v : c.h) {
            put_f64(blob, v.real());
            put_f64(blob, v.imag());
        }
        for (const auto& v : c.mean) {
            put_f64(blob, v.real());
            put_f64(blob, v.imag());
        }
        for (double v : c.var) put_f64(blob, v);
        offset += 5 * mn;
    }
    if (!blob) throw InputError("write failed for " + blob_path.string());

    std::ofstream out(json_path);
    if (!out) throw InputError("cannot write " + json_path.string());
    out << j.dump(2) << '\n';
}

FilterBank load_filter_bank(const std::filesystem::path& json_path) {
    std::ifstream in(json_path);
    if (!in) throw InputError("cannot open " + json_path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("bad filter bank descriptor: " + std::string(e.what()));
    }
    try {
        if (j.at("format") != "ocular-filter-bank") throw InputError("not a filter bank descriptor");
        FilterBank bank;
        bank.domain = parse_domain(j.at("domain").get<std::string>());
        bank.rows = j.at("rows").get<int>();
        bank.cols = j.at("cols").get<int>();
        const auto& p = j.at("params");
        bank.params = {p.at("a").get<double>(), p.at("b").get<double>(), p.at("c").get<double>(),
                       p.at("sigma2").get<double>(), p.at("epsilon").get<double>()};
        const std::size_t mn = static_cast<std::size_t>(bank.rows) * bank.cols;

        const auto blob_path = json_path.parent_path() / j.at("blob").get<std::string>();
        std::ifstream bin(blob_path, std::ios::binary);
        if (!bin) throw InputError("cannot open " + blob_path.string());
        std::vector<unsigned char> blob((std::istreambuf_iterator<char>(bin)), std::istreambuf_iterator<char>());
        const std::size_t doubles = blob.size() / 8;

        for (const auto& jc : j.at("classes")) {
            ClassFilter c;
            c.state = parse_state(jc.at("state").get<std::string>());
            c.training_count = jc.at("training_count").get<int>();
            const auto h_off = jc.at("h_offset").get<std::size_t>();
            const auto m_off = jc.at("mean_offset").get<std::size_t>();
            const auto v_off = jc.at("var_offset").get<std::size_t>();
            if (h_off + 2 * mn > doubles || m_off + 2 * mn > doubles || v_off + mn > doubles)
                throw InputError("filter bank blob truncated");
            c.h.resize(mn);
            c.mean.resize(mn);
            c.var.resize(mn);
            for (std::size_t k = 0; k < mn; ++k) {
                c.h[k] = {get_f64(blob, h_off + 2 * k), get_f64(blob, h_off + 2 * k + 1)};
                c.mean[k] = {get_f64(blob, m_off + 2 * k), get_f64(blob, m_off + 2 * k + 1)};
                c.var[k] = get_f64(blob, v_off + k);
            }
            bank.classes.push_back(std::move(c));
        }
        return bank;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("bad filter bank descriptor: " + std::string(e.what()));
    } catch (const InvalidArgument& e) {
        throw InputError(std::string("bad filter bank descriptor: ") + e.what());
    }
}

}  // namespace ocular
