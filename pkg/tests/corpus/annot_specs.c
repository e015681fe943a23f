unsigned int total = 0;

int accumulate(unsigned int v) /*@ FNSPEC ⟨accumulate_spec: total increases⟩ */
{
    while (v > 0) { /*@ @ INVARIANT ⟨total <= 4294967295⟩ */
        total = total + 1;
        v = v - 1;
    }
    return 0;
}
