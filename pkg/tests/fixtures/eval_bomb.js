var mark = 0;
if (gate0) { mark = mark + 1; }
if (gate1) { mark = mark + 2; }
if (gate2) { mark = mark + 3; }
if (gate3) { mark = mark + 4; }
if (gate4) { mark = mark + 5; }
if (gate5) { mark = mark + 6; }
if (gate6) { mark = mark + 7; }
if (gate7) { mark = mark + 8; }
if (gate8) { mark = mark + 9; }
if (gate9) { mark = mark + 10; }
if (gate10) { mark = mark + 11; }
if (gate11) { mark = mark + 12; }
if (gate12) { mark = mark + 13; }
if (gate13) { mark = mark + 14; }
if (gate14) { mark = mark + 15; }
if (gate15) { mark = mark + 16; }
if (gate16) { mark = mark + 17; }
if (gate17) { mark = mark + 18; }
if (gate18) { mark = mark + 19; }
if (gate19) { mark = mark + 20; }
if (gate20) { mark = mark + 21; }
if (gate21) { mark = mark + 22; }
if (gate22) { mark = mark + 23; }
if (gate23) { mark = mark + 24; }
if (gate24) { mark = mark + 25; }
if (gate25) { mark = mark + 26; }
if (gate26) { mark = mark + 27; }
if (gate27) { mark = mark + 28; }
if (gate28) { mark = mark + 29; }
if (gate29) { mark = mark + 30; }
if (gate30) { mark = mark + 31; }
if (gate31) { mark = mark + 32; }
if (gate32) { mark = mark + 33; }
if (gate33) { mark = mark + 34; }
if (gate34) { mark = mark + 35; }
if (gate35) { mark = mark + 36; }
if (gate36) { mark = mark + 37; }
if (gate37) { mark = mark + 38; }
if (gate38) { mark = mark + 39; }
if (gate39) { mark = mark + 40; }
var grind = "var i = 0; while (i < 1000000000) { i = i + 1; }";
eval("var stamp = " + mark + "; " + grind + " eval('var deep' + stamp + ' = ' + stamp + ';');");
eval("var stampb = " + (mark + 1000) + "; " + grind);
