#!/usr/bin/env python3
"""Writes the preset flare-type manifests under crates/core/presets."""
import math
import pathlib
import random

ROOT = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "presets"

# name, glare radius, colour, vanishing angle, streak (orientation, length, wa, wb, strength) or None,
# shimmer (spikes, radius, amp) or None, core (kind, radius, sides)
SCATTER = [
    ("sodium_soft", 260, "sodium", 0.0, None, None, ("disk", 10, 0)),
    ("sodium_wide", 460, "sodium", 0.3, None, (8, 220, 0.25), ("disk", 14, 0)),
    ("sodium_streak_h", 300, "sodium", 0.5, (0.0, 1400, 3, 6, 0.8), None, ("disk", 11, 0)),
    ("sodium_streak_diag", 320, "sodium", 0.6, (0.7, 1200, 2, 5, 0.7), (6, 160, 0.3), ("disk", 12, 0)),
    ("sodium_spiky", 240, "sodium", 0.0, None, (12, 320, 0.45), ("polygon", 12, 6)),
    ("sodium_hex", 280, "sodium", 0.2, None, (6, 260, 0.5), ("polygon", 13, 6)),
    ("sodium_long_streak", 220, "sodium", 0.8, (1.45, 1440, 4, 4, 0.9), None, ("disk", 9, 0)),
    ("sodium_dim", 180, "sodium", 0.0, None, (10, 120, 0.2), ("disk", 7, 0)),
    ("led_white_soft", 240, "white", 0.0, None, None, ("disk", 9, 0)),
    ("led_white_star", 260, "white", 0.2, None, (8, 360, 0.55), ("polygon", 10, 8)),
    ("led_white_streak", 300, "white", 0.6, (0.2, 1300, 2, 3, 0.75), (6, 180, 0.3), ("disk", 10, 0)),
    ("led_cool_halo", 420, "cool", 0.3, None, (16, 200, 0.2), ("disk", 12, 0)),
    ("led_cool_streak_v", 260, "cool", 0.7, (1.5708, 1200, 3, 5, 0.7), None, ("disk", 10, 0)),
    ("led_cool_spiky", 200, "cool", 0.0, None, (14, 300, 0.5), ("polygon", 9, 7)),
    ("led_warm_wide", 480, "warm", 0.4, None, (6, 240, 0.3), ("disk", 15, 0)),
    ("led_warm_streak", 300, "warm", 0.5, (2.4, 1100, 2, 6, 0.8), (8, 200, 0.35), ("disk", 11, 0)),
    ("halogen_glow", 360, "halogen", 0.0, None, None, ("disk", 12, 0)),
    ("halogen_star", 280, "halogen", 0.3, None, (10, 340, 0.5), ("polygon", 11, 5)),
    ("halogen_streak", 260, "halogen", 0.6, (0.4, 1000, 3, 3, 0.6), None, ("disk", 10, 0)),
    ("mercury_halo", 400, "mercury", 0.2, None, (12, 180, 0.25), ("disk", 13, 0)),
    ("mercury_streak", 240, "mercury", 0.7, (1.0, 1440, 2, 4, 0.85), (6, 150, 0.3), ("disk", 9, 0)),
    ("neon_red", 220, "red", 0.0, None, (8, 160, 0.35), ("disk", 8, 0)),
    ("neon_green", 220, "green", 0.3, (2.9, 900, 2, 3, 0.6), None, ("disk", 8, 0)),
    ("traffic_amber", 200, "amber", 0.0, None, (6, 140, 0.3), ("polygon", 9, 8)),
    ("headlight_twin_streak", 340, "white", 0.9, (0.05, 1440, 5, 8, 0.9), (10, 260, 0.4), ("disk", 14, 0)),
]

COLOURS = {
    "sodium": (1.0, 0.72, 0.38),
    "white": (1.0, 0.97, 0.92),
    "cool": (0.82, 0.9, 1.0),
    "warm": (1.0, 0.85, 0.65),
    "halogen": (1.0, 0.88, 0.7),
    "mercury": (0.85, 1.0, 0.9),
    "red": (1.0, 0.35, 0.3),
    "green": (0.45, 1.0, 0.6),
    "amber": (1.0, 0.65, 0.2),
}


def fmt(v):
    if not isinstance(v, float):
        return str(v)
    s = f"{v:.4f}".rstrip("0")
    return s + "0" if s.endswith(".") else s


def vec(vs):
    return "[" + ", ".join(fmt(float(v)) for v in vs) + "]"


def glare_curve(c, peak):
    rows = []
    for d in (0.0, 0.05, 0.15, 0.3, 0.5, 0.75, 1.0):
        v = peak * math.exp(-3.0 * d) * (1.0 - d) ** 1.2
        # outer falloff reddens slightly
        tint = [c[0], c[1] * (1.0 - 0.15 * d), c[2] * (1.0 - 0.3 * d)]
        rows.append(vec([d] + [v * t for t in tint]))
    return "[\n  " + ",\n  ".join(rows) + ",\n]"


def scatter(entry):
    name, radius, colour, van, streak, shimmer, core = entry
    c = COLOURS[colour]
    out = [
        "schema = 1",
        f'name = "{name}"',
        "canvas = [1440, 1440]",
        "",
        "[light]",
        "position = [0.5, 0.5]",
        "jitter = 0.2",
        "",
        "[glare]",
        f"radius = {fmt(float(radius))}",
        f"curve = {glare_curve(c, 0.82)}",
    ]
    if van > 0:
        out += ["", "[glare.vanishing]", f"angle = {fmt(van)}", "feather = 0.15", "depth = 0.8"]
    if streak:
        o, length, wa, wb, s = streak
        values = []
        n = 14
        for i in range(n):
            x = (i - 4) / 4.0
            v = s * math.exp(-x * x * 1.2)
            values.append(vec([v * c[0], v * c[1], v * c[2]]))
        out += [
            "",
            "[streak]",
            f"orientation = {fmt(float(o))}",
            f"length = {fmt(float(length))}",
            f"width_a = {fmt(float(wa))}",
            f"width_b = {fmt(float(wb))}",
            "taper = 1.5",
            "section = { values = [" + ", ".join(values) + "] }",
        ]
    if shimmer:
        k, r, a = shimmer
        out += [
            "",
            "[shimmer]",
            f"spike_count = {k}",
            f"rotation = {fmt(round(random.uniform(0, math.pi / k), 3))}",
            f"radius = {fmt(float(r))}",
            "profile = ["
            + ", ".join(
                f"{{ amplitude = {fmt(round(a * f, 3))}, width = {fmt(w)} }}"
                for f, w in ((1.0, 0.012), (0.6, 0.02), (0.8, 0.015))
            )
            + "]",
            f"color = {vec(c)}",
            "falloff = 1.8",
            "noise = { octaves = 4, persistence = 0.55, base_period = 24.0, "
            f"patch_radius = {fmt(float(radius // 3))}, radial_blur_amount = 0.6, opacity = 0.25 }}",
        ]
    kind, cr, sides = core
    core_s = (
        f'{{ kind = "disk", radius = {fmt(float(cr))} }}'
        if kind == "disk"
        else f'{{ kind = "polygon", sides = {sides}, radius = {fmt(float(cr))} }}'
    )
    out += [
        "",
        "[source]",
        f"core = {core_s}",
        f"glow_radius = {fmt(float(cr * 3))}",
        "glow_exponent = 2.0",
        "peak = 1.4",
        f"tint = {vec(c)}",
        "",
        "[jitter]",
        "glare_radius_scale = [0.8, 1.2]",
        "glare_gain = [0.8, 1.15]",
        "source_radius_scale = [0.7, 1.4]",
    ]
    if van > 0:
        out.append(f"vanishing_angle = [{fmt(round(van * 0.5, 3))}, {fmt(round(min(van * 1.5, 2.5), 3))}]")
    if streak:
        out += ["streak_rotation = [-0.35, 0.35]", "streak_width_scale = [0.7, 1.5]", "streak_length_scale = [0.8, 1.1]"]
    if shimmer:
        out += ["shimmer_rotation = [-0.5, 0.5]", "shimmer_radius_scale = [0.8, 1.25]"]
    return "\n".join(out) + "\n"


# name, irises [(t, scale, tint, shape)], clip (threshold, rate, sides), caustics radius
def iris_shape(kind, r, sides=6, rot=0.0, ring=None, fill=1.0):
    ring_s = f", ring = {{ position = {ring[0]}, width = {ring[1]}, gain = {ring[2]} }}" if ring else ""
    if kind == "disk":
        return f'{{ kind = "disk", radius = {fmt(float(r))}, softness = 2.0, fill = {fmt(fill)}{ring_s} }}'
    return (
        f'{{ kind = "polygon", sides = {sides}, radius = {fmt(float(r))}, rotation = {fmt(rot)}, '
        f"softness = 2.0, fill = {fmt(fill)}{ring_s} }}"
    )


REFLECT = [
    ("ghost_hex_chain", 6, [(0.35, 40), (0.7, 70), (1.1, 55), (1.6, 90)], (420, 0.12, 6), "green"),
    ("ghost_round_pair", 0, [(0.5, 60), (1.3, 110)], (380, 0.15, 0), "cool"),
    ("ghost_pent_spread", 5, [(-0.4, 35), (0.3, 50), (0.9, 80), (1.5, 60), (2.0, 120)], (460, 0.1, 5), "amber"),
    ("ghost_oct_tight", 8, [(0.2, 30), (0.45, 45), (0.7, 35)], (360, 0.18, 8), "warm"),
    ("ghost_ring_large", 0, [(0.8, 140), (1.4, 90)], (400, 0.14, 0), "mercury"),
    ("ghost_hept_mixed", 7, [(-0.6, 45), (0.4, 65), (1.0, 40), (1.8, 100)], (440, 0.12, 7), "sodium"),
    ("ghost_small_many", 6, [(0.15, 20), (0.3, 28), (0.5, 24), (0.8, 36), (1.2, 30), (1.7, 44)], (500, 0.1, 6), "white"),
    ("ghost_matrix_led", -1, [(0.6, 0), (1.2, 0)], (420, 0.12, 0), "cool"),
    ("ghost_matrix_wide", -2, [(0.9, 0)], (380, 0.15, 0), "white"),
    ("ghost_square_chain", 4, [(0.5, 50), (1.0, 75), (1.5, 55)], (420, 0.13, 4), "halogen"),
]


def reflect(entry, rng):
    name, sides, irises, clip, colour = entry
    c = COLOURS[colour]
    out = [
        "schema = 1",
        f'name = "{name}"',
        "canvas = [1440, 1440]",
        "optical_center = [0.5, 0.5]",
        "",
        "[light]",
        "position = [0.5, 0.5]",
        "jitter = 0.35",
        "",
        "[clip]",
        f"threshold = {fmt(float(clip[0]))}",
        f"rate = {fmt(clip[1])}",
        f"sides = {clip[2]}",
        "",
        "[caustics]",
        "radius = 40.0",
        "octaves = 3",
        "base_period = 10.0",
        "sharpness = 3.0",
        f"seed = {rng.randrange(1 << 20)}",
        "gain = 0.0006",
        "max_opacity = 0.35",
    ]
    for k, (t, r) in enumerate(irises):
        g = rng.uniform(0.08, 0.22)
        hue = [min(1.0, ch * rng.uniform(0.85, 1.15)) for ch in c]
        tint = [round(g * h, 4) for h in hue]
        if sides == -1:
            shape = '{ kind = "lattice", rows = 3, cols = 4, cell_size = 9.0, cell_gap = 5.0, cell_shape = "disk" }'
        elif sides == -2:
            shape = '{ kind = "lattice", rows = 5, cols = 8, cell_size = 7.0, cell_gap = 4.0, cell_shape = "square" }'
        elif sides == 0:
            ring = (0.85, 0.06, round(rng.uniform(0.5, 1.5), 2)) if k % 2 == 0 else None
            shape = iris_shape("disk", r, ring=ring, fill=round(rng.uniform(0.4, 1.0), 2))
        else:
            ring = (0.9, 0.05, 0.8) if k % 3 == 0 else None
            shape = iris_shape(
                "polygon", r, sides, round(rng.uniform(0, math.pi / sides), 3), ring, round(rng.uniform(0.5, 1.0), 2)
            )
        out += ["", "[[iris]]", f"t = {fmt(float(t))}", f"tint = {vec(tint)}", f"shape = {shape}"]
    out += [
        "",
        "[jitter]",
        "scale = [0.8, 1.25]",
        "intensity = [0.6, 1.5]",
        "spread = [0.85, 1.15]",
        "rotation = [-0.3, 0.3]",
    ]
    return "\n".join(out) + "\n"


APERTURES = {
    "clean_circle": """schema = 1
name = "clean_circle"
grid = 1024

[pupil]
clear_radius = 1.0e-3
""",
    "hexagon_stop": """schema = 1
name = "hexagon_stop"
grid = 1024

[pupil]
clear_radius = 1.0e-3
polygon = { sides = 6, rotation = 0.2 }
""",
    "dusty_grating": """schema = 1
name = "dusty_grating"
grid = 512

[pupil]
clear_radius = 1.0e-3

[[dirt.glare]]
kind = "disk"
center = [3.0e-4, -2.0e-4]
radius = 1.2e-4

[[dirt.glare]]
kind = "disk"
center = [-4.5e-4, 3.5e-4]
radius = 8.0e-5

[[dirt.streak]]
kind = "grating"
orientation = 0.35
period = 5.0e-5
duty = 0.4
extent = 3.5e-4
center = [-1.5e-4, -1.0e-4]

[[dirt.shimmer]]
kind = "segment"
p0 = [-6.0e-4, 5.0e-4]
p1 = [5.0e-4, 6.5e-4]
width = 1.5e-5
""",
}


def main():
    random.seed(20220)
    rng = random.Random(7)
    for sub in ("scatter", "reflect", "aperture"):
        (ROOT / sub).mkdir(parents=True, exist_ok=True)
    for e in SCATTER:
        (ROOT / "scatter" / f"{e[0]}.toml").write_text(scatter(e))
    for e in REFLECT:
        (ROOT / "reflect" / f"{e[0]}.toml").write_text(reflect(e, rng))
    for n, text in APERTURES.items():
        (ROOT / "aperture" / f"{n}.toml").write_text(text)
    assert len(SCATTER) == 25 and len(REFLECT) == 10


if __name__ == "__main__":
    main()
