int checked_div(int a, int b)
{
    assert(b != 0);
    int q = a / b;
    assert(q * b <= a);
    return q;
}
