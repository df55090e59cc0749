#include "ctv/derivation.hpp"

namespace ctv::detail {

// Golden Strong catalog: number, pattern, category, strategy, first reported here.
const std::vector<GoldenRow>& golden_rows() {
    static const std::vector<GoldenRow> rows{
        {1, "A^inv ~> V_u ~> V_a", "I-A", "Cache Collision", false},
        {2, "V^inv ~> V_u ~> V_a", "I-A", "Cache Collision", false},
        {3, "A_a^inv ~> V_u ~> V_a", "I-A", "Cache Collision", false},
        {4, "V_a^inv ~> V_u ~> V_a", "I-A", "Cache Collision", false},
        {5, "A_a^inv ~> V_u ~> A_a", "E-A", "Flush + Reload", false},
        {6, "V_a^inv ~> V_u ~> A_a", "E-A", "Flush + Reload", false},
        {7, "A^inv ~> V_u ~> A_a", "E-A", "Flush + Reload", false},
        {8, "V^inv ~> V_u ~> A_a", "E-A", "Flush + Reload", false},
        {9, "V_u^inv ~> A_a ~> V_u", "E-A", "Reload + Time", false},
        {10, "V_u^inv ~> V_a ~> V_u", "I-A", "Reload + Time", false},
        {11, "A_a ~> V_u^inv ~> A_a", "E-A", "Flush + Probe", false},
        {12, "A_a ~> V_u^inv ~> V_a", "I-A", "Flush + Probe", false},
        {13, "V_a ~> V_u^inv ~> A_a", "E-A", "Flush + Probe", false},
        {14, "V_a ~> V_u^inv ~> V_a", "I-A", "Flush + Probe", false},
        {15, "V_u ~> A_a^inv ~> V_u", "E-A", "Flush + Time", false},
        {16, "V_u ~> V_a^inv ~> V_u", "I-A", "Flush + Time", false},
        {17, "A^inv ~> V_u^inv ~> A_a", "E-A", "Cache Coherence Flush + Reload", true},
        {18, "A^inv ~> V_u^inv ~> V_a", "I-A", "Cache Coherence Flush + Reload", true},
        {19, "V^inv ~> V_u^inv ~> A_a", "E-A", "Cache Coherence Flush + Reload", true},
        {20, "V^inv ~> V_u^inv ~> V_a", "I-A", "Cache Coherence Flush + Reload", true},
        {21, "A_a^inv ~> V_u^inv ~> A_a", "E-SA", "Cache Coherence Prime + Probe", true},
        {22, "A_a^inv ~> V_u^inv ~> V_a", "I-SA", "Cache Coherence Prime + Probe", true},
        {23, "V_a^inv ~> V_u^inv ~> A_a", "E-SA", "Cache Coherence Prime + Probe", true},
        {24, "V_a^inv ~> V_u^inv ~> V_a", "I-SA", "Cache Coherence Prime + Probe", true},
        {25, "A_d^inv ~> V_u^inv ~> A_d", "E-S", "Cache Coherence Prime + Probe", true},
        {26, "A_d^inv ~> V_u^inv ~> V_d", "I-S", "Cache Coherence Prime + Probe", true},
        {27, "V_d^inv ~> V_u^inv ~> A_d", "E-S", "Cache Coherence Prime + Probe", true},
        {28, "V_d^inv ~> V_u^inv ~> V_d", "I-S", "Cache Coherence Prime + Probe", true},
        {29, "V_u^inv ~> A_a^inv ~> V_u", "E-SA", "Cache Coherence Evict + Time", true},
        {30, "V_u^inv ~> V_a^inv ~> V_u", "I-SA", "Cache Coherence Evict + Time", true},
        {31, "V_u^inv ~> A_d^inv ~> V_u", "E-S", "Cache Coherence Evict + Time", true},
        {32, "V_u^inv ~> V_d^inv ~> V_u", "I-S", "Cache Coherence Evict + Time", true},
        {33, "V_u ~> V_a ~> V_u", "I-SA", "Bernstein's Attack", false},
        {34, "V_u ~> V_d ~> V_u", "I-S", "Bernstein's Attack", false},
        {35, "V_d ~> V_u ~> V_d", "I-S", "Bernstein's Attack", false},
        {36, "V_a ~> V_u ~> V_a", "I-SA", "Bernstein's Attack", false},
        {37, "V_d ~> V_u ~> A_d", "E-S", "Evict + Probe", false},
        {38, "V_a ~> V_u ~> A_a", "E-SA", "Evict + Probe", false},
        {39, "A_d ~> V_u ~> V_d", "I-S", "Prime + Time", false},
        {40, "A_a ~> V_u ~> V_a", "I-SA", "Prime + Time", false},
        {41, "V_u ~> A_d ~> V_u", "E-S", "Evict + Time", false},
        {42, "V_u ~> A_a ~> V_u", "E-SA", "Evict + Time", false},
        {43, "A_d ~> V_u ~> A_d", "E-S", "Prime + Probe", false},
        {44, "A_a ~> V_u ~> A_a", "E-SA", "Prime + Probe", false},
        {45, "A^inv ~> V_u ~> V_a^inv", "I-A", "Cache Collision Inv.", false},
        {46, "V^inv ~> V_u ~> V_a^inv", "I-A", "Cache Collision Inv.", false},
        {47, "A_a^inv ~> V_u ~> V_a^inv", "I-A", "Flush + Flush", false},
        {48, "V_a^inv ~> V_u ~> V_a^inv", "I-A", "Flush + Flush", false},
        {49, "A_a^inv ~> V_u ~> A_a^inv", "E-A", "Flush + Flush", false},
        {50, "V_a^inv ~> V_u ~> A_a^inv", "E-A", "Flush + Flush", false},
        {51, "A^inv ~> V_u ~> A_a^inv", "E-A", "Flush + Reload Inv.", false},
        {52, "V^inv ~> V_u ~> A_a^inv", "E-A", "Flush + Reload Inv.", false},
        {53, "V_u^inv ~> A_a ~> V_u^inv", "E-A", "Reload + Time Inv.", false},
        {54, "V_u^inv ~> V_a ~> V_u^inv", "I-A", "Reload + Time Inv.", false},
        {55, "A_a ~> V_u^inv ~> A_a^inv", "E-A", "Flush + Probe Inv.", false},
        {56, "A_a ~> V_u^inv ~> V_a^inv", "I-A", "Flush + Probe Inv.", false},
        {57, "V_a ~> V_u^inv ~> A_a^inv", "E-A", "Flush + Probe Inv.", false},
        {58, "V_a ~> V_u^inv ~> V_a^inv", "I-A", "Flush + Probe Inv.", false},
        {59, "V_u ~> A_a^inv ~> V_u^inv", "E-A", "Flush + Time Inv.", false},
        {60, "V_u ~> V_a^inv ~> V_u^inv", "I-A", "Flush + Time Inv.", false},
        {61, "A^inv ~> V_u^inv ~> A_a^inv", "E-A", "Cache Coherence Flush + Reload Inv.", true},
        {62, "A^inv ~> V_u^inv ~> V_a^inv", "I-A", "Cache Coherence Flush + Reload Inv.", true},
        {63, "V^inv ~> V_u^inv ~> A_a^inv", "E-A", "Cache Coherence Flush + Reload Inv.", true},
        {64, "V^inv ~> V_u^inv ~> V_a^inv", "I-A", "Cache Coherence Flush + Reload Inv.", true},
        {65, "A_a^inv ~> V_u^inv ~> A_a^inv", "E-SA", "Cache Coherence Prime + Probe Inv.", true},
        {66, "A_a^inv ~> V_u^inv ~> V_a^inv", "I-SA", "Cache Coherence Prime + Probe Inv.", true},
        {67, "V_a^inv ~> V_u^inv ~> A_a^inv", "E-SA", "Cache Coherence Prime + Probe Inv.", true},
        {68, "V_a^inv ~> V_u^inv ~> V_a^inv", "I-SA", "Cache Coherence Prime + Probe Inv.", true},
        {69, "A_d^inv ~> V_u^inv ~> A_d^inv", "E-S", "Cache Coherence Prime + Probe Inv.", true},
        {70, "A_d^inv ~> V_u^inv ~> V_d^inv", "I-S", "Cache Coherence Prime + Probe Inv.", true},
        {71, "V_d^inv ~> V_u^inv ~> A_d^inv", "E-S", "Cache Coherence Prime + Probe Inv.", true},
        {72, "V_d^inv ~> V_u^inv ~> V_d^inv", "I-S", "Cache Coherence Prime + Probe Inv.", true},
        {73, "V_u^inv ~> A_a^inv ~> V_u^inv", "E-SA", "Cache Coherence Evict + Time Inv.", true},
        {74, "V_u^inv ~> V_a^inv ~> V_u^inv", "I-SA", "Cache Coherence Evict + Time Inv.", true},
        {75, "V_u^inv ~> A_d^inv ~> V_u^inv", "E-S", "Cache Coherence Evict + Time Inv.", true},
        {76, "V_u^inv ~> V_d^inv ~> V_u^inv", "I-S", "Cache Coherence Evict + Time Inv.", true},
        {77, "V_u ~> V_a ~> V_u^inv", "I-SA", "Bernstein's Inv. Attack", false},
        {78, "V_u ~> V_d ~> V_u^inv", "I-S", "Bernstein's Inv. Attack", false},
        {79, "V_d ~> V_u ~> V_d^inv", "I-S", "Bernstein's Inv. Attack", false},
        {80, "V_a ~> V_u ~> V_a^inv", "I-SA", "Bernstein's Inv. Attack", false},
        {81, "V_d ~> V_u ~> A_d^inv", "E-S", "Evict + Probe Inv.", false},
        {82, "V_a ~> V_u ~> A_a^inv", "E-SA", "Evict + Probe Inv.", false},
        {83, "A_d ~> V_u ~> V_d^inv", "I-S", "Prime + Time Inv.", false},
        {84, "A_a ~> V_u ~> V_a^inv", "I-SA", "Prime + Time Inv.", false},
        {85, "V_u ~> A_d ~> V_u^inv", "E-S", "Evict + Time Inv.", false},
        {86, "V_u ~> A_a ~> V_u^inv", "E-SA", "Evict + Time Inv.", false},
        {87, "A_d ~> V_u ~> A_d^inv", "E-S", "Prime + Probe Inv.", false},
        {88, "A_a ~> V_u ~> A_a^inv", "E-SA", "Prime + Probe Inv.", false},
    };
    return rows;
}

}  // namespace ctv::detail
