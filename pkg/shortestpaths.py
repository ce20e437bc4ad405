import pandas as pd
import streamlit as st

from kernelsrc.makeplots import plot_block_touches
from kernelsrc.src.floyd_warshall import FwConfig, count_block_touches, count_sweep_touches, fw_iterative, fw_recursive
from kernelsrc.src.generators import gen_distances


@st.cache_data(show_spinner=False)
def touch_table(sizes: tuple[int, ...], base: int, density: float, seed: int) -> pd.DataFrame:
    rows = []
    cfg = FwConfig(base)
    for n in sizes:
        w = gen_distances(n, density, seed)
        rows.append({"n": n, "variant": "recursive", "touches": count_block_touches(w, cfg)})
        rows.append({"n": n, "variant": "iterative", "touches": count_sweep_touches(w, cfg)})
    return pd.DataFrame(rows)


def render(project: dict) -> None:
    """
    Shortest Paths tab: the block-touch proxy for the recursive and the
    iterative Floyd-Warshall at a fixed base block order.
    """
    c1, c2, c3 = st.columns(3)
    base = c1.selectbox("Base block order", [4, 8, 16, 32, 64], index=1)
    density = c2.number_input("Arc density", min_value=0.0, max_value=1.0, value=0.1, step=0.05)
    seed = c3.number_input("Seed", min_value=0, value=0, step=1)

    sizes = tuple(base * 2 ** k for k in range(1, 5))
    df = touch_table(sizes, base, float(density), int(seed))
    st.plotly_chart(plot_block_touches(df), use_container_width=True)

    wide = df.pivot(index="n", columns="variant", values="touches").reset_index()
    wide["iterative / recursive"] = wide["iterative"] / wide["recursive"]
    st.dataframe(wide, hide_index=True, use_container_width=True)

    exp = st.expander("Check recursive against iterative", icon="🔍")
    n_check = exp.number_input("n", min_value=1, max_value=256, value=33, step=1)
    if exp.button("Run check"):
        w = gen_distances(int(n_check), float(density), int(seed))
        if fw_recursive(w, FwConfig(base)) == fw_iterative(w):
            exp.success(f"Distances agree for n={n_check}", icon="✅")
        else:
            exp.error(f"Distances differ for n={n_check}", icon="❗")
