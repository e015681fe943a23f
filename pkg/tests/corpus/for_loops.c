int triangle(int n)
{
    int acc = 0;
    for (int i = 1; i <= n; i++)
        acc += i;
    return acc;
}

int skip_evens(int n)
{
    int acc = 0;
    for (int i = 0; i < n; i += 2)
        acc = acc + 1;
    return acc;
}
