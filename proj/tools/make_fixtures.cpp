// Regenerates the golden fixtures under fixtures/ from the builders.
#include <ipuc/ipuc.hpp>

#include <fstream>
#include <iostream>

namespace {

void put(const std::string& dir, const std::string& name, const std::string& text) {
    std::ofstream f(dir + "/" + name, std::ios::binary);
    f << text;
    std::cout << name << "\n";
}

void drv(const std::string& dir, const std::string& name, const char* mode, const ipuc::derivation& d) {
    put(dir, name, std::string("% mode: ") + mode + "\n" + ipuc::write_derivation(d));
}

} // namespace

int main(int argc, char** argv) {
    using namespace ipuc;
    const std::string dir = argc > 1 ? argv[1] : "fixtures";
    const formula p = formula::atom("p"), q = formula::atom("q");
    drv(dir, "cpr.drv", "ipuc", build_cpr(p, q));
    drv(dir, "connex_t.drv", "ipucv", build_connex(p, q));
    drv(dir, "connex_31.drv", "ipucv31", build_connex_via31(p, q));
    drv(dir, "lewis_axiom.drv", "ipucv", build_lewis_axiom(p, q));
    drv(dir, "lewis_axiom_figure.drv", "ipucv", build_lewis_axiom_figure(p, q));
    drv(dir, "t_reduction.drv", "ipucv", build_t_detour(p.with_label(label::some_world()), q, 1));
    drv(dir, "t_detour3.drv", "ipucv", build_t_detour(p.with_label(label::some_world()), q, 3));
    drv(dir, "b_detour2.drv", "ipucv", build_b_detour(p.with_label(label::all_worlds()), q, 2));

    // refutes ~~p -> p
    finite_model m;
    m.worlds = {"w0", "w1"};
    m.actual = 0;
    m.access = {0b11, 0b10};
    m.spheres = {{}, {}};
    m.val = {{"p", 0b10}};
    put(dir, "kripke2.model", write_model(m));

    // three worlds, nested spheres at the actual world
    finite_model s;
    s.worlds = {"w0", "w1", "w2"};
    s.actual = 0;
    s.access = {0b001, 0b010, 0b100};
    s.spheres = {{0b001, 0b011, 0b111}, {0b010, 0b111}, {0b100}};
    s.val = {{"p", 0b010}, {"q", 0b110}};
    put(dir, "spheres3.model", write_model(s));
}
