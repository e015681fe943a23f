int dispatch(int op, int a, int b)
{
    switch (op) {
    case 0:
        return a + b;
    case 1:
        return a - b;
    default:
        break;
    }
    return 0;
}
