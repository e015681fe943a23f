int declared_early(int a, int b);
long with_names(long width, long height);
void no_result(int flag);

int declared_early(int a, int b)
{
    return a ^ b;
}
